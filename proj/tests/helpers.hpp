// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Signal generators and scratch-directory helpers shared by the unit tests.

#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "eegsweep/recording.hpp"

namespace testutil {

inline std::vector<double> sine(double f, double fs, double seconds, double amp = 1.0,
                                double phase = 0.0) {
  const auto n = static_cast<std::size_t>(std::lround(fs * seconds));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs + phase);
  return x;
}

inline std::vector<double> white(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

inline eegsweep::Recording montage_recording(const eegsweep::SignalMatrix& s, double fs,
                                             std::string id = "S001",
                                             eegsweep::Label label = eegsweep::Label::TD) {
  eegsweep::Recording r;
  r.subject_id = std::move(id);
  r.label = label;
  r.sample_rate_hz = fs;
  r.channel_names = eegsweep::Montage::standard_1020().names();
  r.samples = s;
  return r;
}

inline eegsweep::Recording noise_recording(double fs, double seconds, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(std::lround(fs * seconds));
  eegsweep::SignalMatrix s(19, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  for (Eigen::Index c = 0; c < 19; ++c)
    for (Eigen::Index t = 0; t < n; ++t) s(c, t) = d(rng);
  return montage_recording(s, fs);
}

/// Fresh, empty directory under the system temp dir; removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("eegsweep_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace testutil
