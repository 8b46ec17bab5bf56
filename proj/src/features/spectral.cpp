// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "eegsweep/dsp.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

namespace {

double band_sum(const dsp::Psd& psd, double lo, double hi) {
  double s = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k)
    if (psd.freqs[k] >= lo && psd.freqs[k] < hi) s += psd.power[k];
  return s;
}

}  // namespace

Hjorth hjorth_spectral(const dsp::Psd& psd) {
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    const double f2 = psd.freqs[k] * psd.freqs[k];
    m0 += psd.power[k];
    m2 += f2 * psd.power[k];
    m4 += f2 * f2 * psd.power[k];
  }
  Hjorth h;
  if (!(m0 > 0.0) || !(m2 > 0.0)) return h;
  h.mobility = std::sqrt(m2 / m0);
  h.complexity = std::sqrt(m4 / m2) / h.mobility;
  return h;
}

std::array<double, 4> band_powers(const dsp::Psd& psd, const FeatureParams& p) {
  std::array<double, 4> out{};
  const double total = band_sum(psd, p.total_low_hz, p.total_high_hz);
  if (!(total > 0.0)) return out;
  for (std::size_t b = 0; b < 4; ++b) out[b] = band_sum(psd, p.band_edges[b], p.band_edges[b + 1]) / total;
  return out;
}

double spectral_entropy(const dsp::Psd& psd, const FeatureParams& p) {
  const double total = band_sum(psd, p.total_low_hz, p.total_high_hz);
  std::size_t bins = 0;
  double h = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    if (psd.freqs[k] < p.total_low_hz || psd.freqs[k] >= p.total_high_hz) continue;
    ++bins;
    if (total > 0.0 && psd.power[k] > 0.0) {
      const double q = psd.power[k] / total;
      h -= q * std::log(q);
    }
  }
  if (bins < 2 || !(total > 0.0)) return 0.0;
  return h / std::log(static_cast<double>(bins));
}

double spectral_edge_frequency(const dsp::Psd& psd, const FeatureParams& p) {
  const double total = band_sum(psd, p.total_low_hz, p.total_high_hz);
  if (!(total > 0.0)) return 0.0;
  double cum = 0.0;
  double last = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    if (psd.freqs[k] < p.total_low_hz || psd.freqs[k] >= p.total_high_hz) continue;
    cum += psd.power[k];
    last = psd.freqs[k];
    if (cum >= p.edge_fraction * total) return psd.freqs[k];
  }
  return last;
}

PsdFit psd_fit(const dsp::Psd& psd, double low_hz, double high_hz) {
  // Bins below kZeroPowerRatio x peak hold only FFT rounding residue (e.g. the
  // off-peak bins of a bin-centred tone) and count as zero-power.
  constexpr double kZeroPowerRatio = 1e-20;
  const double peak = psd.power.empty() ? 0.0 : *std::max_element(psd.power.begin(), psd.power.end());
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    const double f = psd.freqs[k];
    if (f < low_hz || f > high_hz || f <= 0.0 || !(psd.power[k] > kZeroPowerRatio * peak)) continue;
    lx.push_back(std::log10(f));
    ly.push_back(std::log10(psd.power[k]));
  }
  PsdFit fit;
  if (lx.size() < 2) return fit;
  const double mx = mean(lx), my = mean(ly);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += e * e;
  }
  fit.mse = ss_res / static_cast<double>(lx.size());
  // A log-spectrum flat to within rounding (spread < 1e-10 decades) has no variance to explain.
  constexpr double kFlatLogSpread = 1e-10;
  const bool flat = syy <= static_cast<double>(lx.size()) * kFlatLogSpread * kFlatLogSpread;
  fit.r2 = flat ? 0.0 : 1.0 - ss_res / syy;
  return fit;
}

std::array<double, 4> band_energies(std::span<const double> x, double fs, const FeatureParams& p) {
  std::array<double, 4> out{};
  if (x.size() < 3) return out;
  std::size_t len = dsp::hamming_kernel_length(p.energy_transition_hz, fs);
  const std::size_t cap = x.size() % 2 == 1 ? x.size() : x.size() - 1;
  len = std::min(len, cap);
  for (std::size_t b = 0; b < 4; ++b) {
    const auto h = dsp::windowed_sinc_bandpass(fs, p.band_edges[b], p.band_edges[b + 1], len);
    const auto y = dsp::filter_zero_phase(x, h);
    double s = 0.0;
    for (double v : y) s += v * v;
    out[b] = s / static_cast<double>(y.size());
  }
  return out;
}

}  // namespace eegsweep
