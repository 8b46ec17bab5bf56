// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "eegsweep/features.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

const std::array<double, 8>& db4_lowpass() {
  static const std::array<double, 8> h{
      -0.010597401784997278, 0.032883011666982945, 0.030841381835986965, -0.18703481171888114,
      -0.02798376941698385,  0.6308807679295904,   0.7148465705525415,   0.23037781330885523};
  return h;
}

const std::array<double, 8>& db4_highpass() {
  static const std::array<double, 8> g = [] {
    const auto& h = db4_lowpass();
    std::array<double, 8> out{};
    for (std::size_t i = 0; i < 8; ++i) out[i] = ((i % 2 == 0) ? -1.0 : 1.0) * h[7 - i];
    return out;
  }();
  return g;
}

WaveletDecomposition dwt(std::span<const double> x, int levels) {
  constexpr std::size_t kTaps = 8;
  if (levels < 1) throw ConfigError("wavelet levels must be >= 1");
  if (x.size() < (std::size_t{1} << levels) + kTaps)
    throw DataError("signal too short for " + std::to_string(levels) + "-level DWT");
  const auto& h = db4_lowpass();
  const auto& g = db4_highpass();
  WaveletDecomposition out;
  std::vector<double> a(x.begin(), x.end());
  for (int level = 0; level < levels; ++level) {
    if (a.size() % 2 == 1) a.push_back(a.back());
    const std::size_t n = a.size();
    const std::size_t half = n / 2;
    std::vector<double> lo(half, 0.0), hi(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      double sl = 0.0, sh = 0.0;
      for (std::size_t i = 0; i < kTaps; ++i) {
        // x[(2k + 1 - i) mod n], written without signed arithmetic.
        const std::size_t idx = (2 * k + 1 + kTaps * n - i) % n;
        sl += h[i] * a[idx];
        sh += g[i] * a[idx];
      }
      lo[k] = sl;
      hi[k] = sh;
    }
    out.details.push_back(std::move(hi));
    a = std::move(lo);
  }
  out.approximation = std::move(a);
  return out;
}

std::vector<double> tkeo(std::span<const double> x) {
  std::vector<double> out;
  if (x.size() < 3) return out;
  out.resize(x.size() - 2);
  for (std::size_t n = 1; n + 1 < x.size(); ++n) out[n - 1] = x[n] * x[n] - x[n - 1] * x[n + 1];
  return out;
}

WaveletFeatures wavelet_features(std::span<const double> x) {
  const auto d = dwt(x, 6);
  WaveletFeatures f;
  auto stats = [](std::span<const double> c, double& m, double& s) {
    const auto t = tkeo(c);
    if (t.empty()) {
      m = s = 0.0;
      return;
    }
    m = mean(t);
    s = std::sqrt(variance(t));
  };
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& c = d.details[k];
    double e = 0.0;
    for (double v : c) e += v * v;
    f.energy[k] = c.empty() ? 0.0 : e / static_cast<double>(c.size());
    stats(c, f.tkeo_stats[2 * k], f.tkeo_stats[2 * k + 1]);
  }
  stats(d.approximation, f.tkeo_stats[12], f.tkeo_stats[13]);
  return f;
}

}  // namespace eegsweep
