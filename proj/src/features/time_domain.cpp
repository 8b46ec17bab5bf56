// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "eegsweep/dsp.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

namespace {

std::vector<double> diff(std::span<const double> x) {
  std::vector<double> d(x.size() > 0 ? x.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return d;
}

double safe_mobility(std::span<const double> x, std::span<const double> dx) {
  const double v = variance(x);
  if (!(v > 0.0)) return 0.0;
  return std::sqrt(variance(dx) / v);
}

/// Expected R/S of white noise for window size n (Anis & Lloyd).
double expected_rs(std::size_t n) {
  const double nd = static_cast<double>(n);
  const double g = std::exp(std::lgamma((nd - 1.0) / 2.0) - std::lgamma(nd / 2.0)) /
                   std::sqrt(std::numbers::pi);
  double s = 0.0;
  for (std::size_t i = 1; i < n; ++i) s += std::sqrt((nd - static_cast<double>(i)) / static_cast<double>(i));
  return g * s;
}

/// Mean rescaled range over non-overlapping windows of size n; 0 if undefined.
double mean_rs(std::span<const double> x, std::size_t n) {
  const std::size_t windows = x.size() / n;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    const auto s = x.subspan(w * n, n);
    const double mu = mean(s);
    double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
    for (double v : s) {
      cum += v - mu;
      lo = std::min(lo, cum);
      hi = std::max(hi, cum);
      ss += (v - mu) * (v - mu);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd > 0.0) {
      sum += (hi - lo) / sd;
      ++used;
    }
  }
  return used > 0 ? sum / static_cast<double>(used) : 0.0;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

Hjorth hjorth(std::span<const double> x) {
  const auto d1 = diff(x);
  const auto d2 = diff(d1);
  Hjorth h;
  h.mobility = safe_mobility(x, d1);
  const double m1 = safe_mobility(d1, d2);
  h.complexity = h.mobility > 0.0 ? m1 / h.mobility : 0.0;
  return h;
}

double higuchi_fd(std::span<const double> x, int kmax) {
  const std::size_t n = x.size();
  if (kmax < 2 || n < static_cast<std::size_t>(2 * kmax)) return 1.0;
  std::vector<double> logk, logl;
  for (int k = 1; k <= kmax; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    double lk = 0.0;
    for (std::size_t m = 0; m < ku; ++m) {
      const std::size_t steps = (n - 1 - m) / ku;
      double len = 0.0;
      for (std::size_t i = 1; i <= steps; ++i) len += std::abs(x[m + i * ku] - x[m + (i - 1) * ku]);
      lk += len * static_cast<double>(n - 1) / (static_cast<double>(steps * ku) * static_cast<double>(ku));
    }
    lk /= static_cast<double>(k);
    if (!(lk > 0.0)) return 1.0;
    logk.push_back(std::log(static_cast<double>(k)));
    logl.push_back(std::log(lk));
  }
  return std::clamp(-ols_slope(logk, logl), 1.0, 2.0);
}

double katz_fd(std::span<const double> x) {
  if (x.size() < 2) return 1.0;
  double len = 0.0, d = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    len += std::abs(x[i] - x[i - 1]);
    d = std::max(d, std::abs(x[i] - x[0]));
  }
  if (!(len > 0.0) || !(d > 0.0)) return 1.0;
  const double ln = std::log10(static_cast<double>(x.size() - 1));
  return ln / (ln + std::log10(d / len));
}

static std::vector<std::size_t> hurst_window_sizes(std::size_t n) {
  std::vector<std::size_t> out;
  const std::size_t hi = n / 2;
  if (hi < 10) return out;
  constexpr int kPoints = 10;
  const double a = std::log10(10.0), b = std::log10(static_cast<double>(hi));
  for (int i = 0; i < kPoints; ++i) {
    const double e = a + (b - a) * i / (kPoints - 1);
    const auto s = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

double hurst_exponent(std::span<const double> x) {
  std::vector<double> lx, ly;
  for (std::size_t s : hurst_window_sizes(x.size())) {
    const double rs = mean_rs(x, s);
    if (!(rs > 0.0)) continue;
    lx.push_back(std::log10(static_cast<double>(s)));
    ly.push_back(std::log10(rs) - std::log10(expected_rs(s)));
  }
  if (lx.size() < 2) return 0.0;
  return 0.5 + ols_slope(lx, ly);
}

double approximate_entropy(std::span<const double> x, int m, double r_fraction) {
  const std::size_t n = x.size();
  const auto mu = static_cast<std::size_t>(m);
  if (m < 1 || n < mu + 2) return 0.0;
  const double r = r_fraction * std::sqrt(variance(x));
  if (!(r > 0.0)) return 0.0;
  const std::size_t nm = n - mu + 1;  // templates of length m
  const std::size_t nm1 = n - mu;     // templates of length m + 1
  std::vector<std::size_t> cm(nm, 1), cm1(nm1, 1);  // self-matches
  // Candidate pairs must be within r on the first coordinate: sweep the sorted order.
  std::vector<std::size_t> order(nm);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && a < b);
  });
  for (std::size_t p = 0; p < nm; ++p) {
    const std::size_t i = order[p];
    for (std::size_t q = p + 1; q < nm; ++q) {
      const std::size_t j = order[q];
      if (x[j] - x[i] > r) break;
      bool match = true;
      for (std::size_t k = 1; k < mu; ++k)
        if (std::abs(x[i + k] - x[j + k]) > r) {
          match = false;
          break;
        }
      if (!match) continue;
      ++cm[i];
      ++cm[j];
      if (i < nm1 && j < nm1 && std::abs(x[i + mu] - x[j + mu]) <= r) {
        ++cm1[i];
        ++cm1[j];
      }
    }
  }
  double phi_m = 0.0, phi_m1 = 0.0;
  for (std::size_t v : cm) phi_m += std::log(static_cast<double>(v) / static_cast<double>(nm));
  for (std::size_t v : cm1) phi_m1 += std::log(static_cast<double>(v) / static_cast<double>(nm1));
  return phi_m / static_cast<double>(nm) - phi_m1 / static_cast<double>(nm1);
}

double decorrelation_time(std::span<const double> x, double fs) {
  const std::size_t n = x.size();
  if (n < 2) return 1.0 / fs;
  const double mu = mean(x);
  const std::size_t nfft = dsp::next_pow2(2 * n);
  std::vector<double> a(nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i] - mu;
  auto spec = dsp::dft(a);
  for (auto& c : spec) c = std::norm(c);
  const auto acf = dsp::idft_real(spec);
  for (std::size_t lag = 1; lag < n; ++lag)
    if (acf[lag] <= 0.0) return static_cast<double>(lag) / fs;
  return static_cast<double>(n) / fs;
}

double zero_crossings(std::span<const double> x) {
  std::size_t count = 0;
  int prev = 0;
  for (double v : x) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return static_cast<double>(count);
}

double line_length(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += std::abs(x[i] - x[i - 1]);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace eegsweep
