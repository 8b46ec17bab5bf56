// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Twenty short deterministic signals exercising every feature branch:
// tones, ramps, noise, degenerate inputs and an odd-length record.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "eegsweep/synth.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

namespace golden {

struct Signal {
  std::string name;
  std::vector<double> x;
};

inline constexpr double kFs = 128.0;

inline std::vector<Signal> corpus() {
  using testutil::sine;
  const double secs = 8.0;
  const std::size_t n = static_cast<std::size_t>(kFs * secs);
  std::vector<Signal> c;
  // Tones whose quarter period is not an integer number of samples, so no
  // autocovariance lag lands on an exact zero crossing.
  c.push_back({"sine_2.5hz", sine(2.5, kFs, secs)});
  c.push_back({"sine_6hz", sine(6.0, kFs, secs, 2.0)});
  c.push_back({"sine_10hz", sine(10.0, kFs, secs)});
  c.push_back({"sine_20hz_phase", sine(20.0, kFs, secs, 0.5, 0.7)});
  // Off-bin on purpose: a bin-centred tone above 40 Hz would leave only
  // rounding residue inside the band-power range.
  c.push_back({"sine_45.3hz", sine(45.3, kFs, secs)});
  {
    auto a = sine(2.5, kFs, secs), b = sine(10.0, kFs, secs);
    for (std::size_t i = 0; i < n; ++i) a[i] += b[i];
    c.push_back({"two_tone", a});
  }
  {
    auto a = sine(10.0, kFs, secs, 1.0);
    for (double& v : a) v += 3.25;
    c.push_back({"sine_offset", a});
  }
  {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<double>(i);
    c.push_back({"line", a});
  }
  {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = 4.0 - 0.01 * static_cast<double>(i);
    c.push_back({"ramp_down", a});
  }
  c.push_back({"white_1", testutil::white(n, 101)});
  c.push_back({"white_2", testutil::white(n, 202, 5.0)});
  c.push_back({"white_16s", testutil::white(2 * n, 303)});
  c.push_back({"pink_1", eegsweep::pink_noise(n, kFs, 404)});
  c.push_back({"pink_2", eegsweep::pink_noise(n, kFs, 505)});
  c.push_back({"constant", std::vector<double>(n, 2.5)});
  {
    std::vector<double> a(n, 0.0);
    a[n / 2] = 1.0;
    c.push_back({"impulse", a});
  }
  {
    auto a = testutil::white(n, 606, 0.1);
    a[n / 3] += 5.0;
    c.push_back({"impulse_in_noise", a});
  }
  {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / kFs;
      a[i] = std::sin(2.0 * std::numbers::pi * (1.0 + 2.0 * t) * t);
    }
    c.push_back({"chirp", a});
  }
  {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (i / 19) % 2 ? 1.0 : -1.0;
    c.push_back({"square", a});
  }
  c.push_back({"white_odd_length", testutil::white(1001, 707)});
  return c;
}

/// Features whose computation ends in a regression (looser tolerance).
inline bool regression_based(std::string_view name) {
  return name == "hurst_exp" || name == "higuchi_fd" || name.starts_with("psd_fit");
}

/// Relative agreement with a small absolute floor for values that are zero up to rounding.
inline bool agrees(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::max(std::abs(want), 1e-6);
}

}  // namespace golden
