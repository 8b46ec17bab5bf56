// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Small labelled point clouds with known geometry for classifier checks.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "eegsweep/features.hpp"

namespace toy {

inline eegsweep::FeatureMatrix make(std::size_t n, std::size_t d) {
  eegsweep::FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  m.labels.resize(n);
  for (std::size_t j = 0; j < d; ++j) m.columns.push_back("X:f" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) m.subject_ids.push_back("T" + std::to_string(i));
  return m;
}

/// Two classes on either side of x0 + x1 = 0 with a gap of width 1 around the boundary.
inline eegsweep::FeatureMatrix separable(std::size_t n, std::uint64_t seed) {
  auto m = make(n, 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t i = 0; i < n;) {
    const double a = u(rng), b = u(rng);
    const double dist = (a + b) / std::numbers::sqrt2;
    if (std::abs(dist) < 0.5) continue;
    m.values(static_cast<Eigen::Index>(i), 0) = a;
    m.values(static_cast<Eigen::Index>(i), 1) = b;
    m.labels[i] = dist > 0 ? 1 : 0;
    ++i;
  }
  return m;
}

/// Four Gaussian clusters at (+-2, +-2); the label is the XOR of the coordinate signs.
inline eegsweep::FeatureMatrix xor4(std::size_t n, std::uint64_t seed) {
  auto m = make(n, 2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    const int sa = (i & 1) ? 1 : -1, sb = (i & 2) ? 1 : -1;
    m.values(static_cast<Eigen::Index>(i), 0) = 2.0 * sa + g(rng);
    m.values(static_cast<Eigen::Index>(i), 1) = 2.0 * sb + g(rng);
    m.labels[i] = sa * sb > 0 ? 1 : 0;
  }
  return m;
}

/// Concentric rings of radius 1 (class 1) and 3 (class 0).
inline eegsweep::FeatureMatrix circles(std::size_t n, std::uint64_t seed) {
  auto m = make(n, 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> g(0.0, 0.2);
  for (std::size_t i = 0; i < n; ++i) {
    const bool inner = i % 2 == 0;
    const double r = (inner ? 1.0 : 3.0) + g(rng), t = angle(rng);
    m.values(static_cast<Eigen::Index>(i), 0) = r * std::cos(t);
    m.values(static_cast<Eigen::Index>(i), 1) = r * std::sin(t);
    m.labels[i] = inner ? 1 : 0;
  }
  return m;
}

/// Two unit-variance Gaussian blobs in `d` dimensions whose centres are 10 sigma apart.
inline eegsweep::FeatureMatrix blobs(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto m = make(n, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const double offset = 10.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    m.labels[i] = static_cast<int>(i % 2);
    for (std::size_t j = 0; j < d; ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(rng) + offset * m.labels[i];
  }
  return m;
}

/// Gaussian features with labels drawn independently of them (61 ones / 60 zeros for n = 121).
inline eegsweep::FeatureMatrix random_labels(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto m = make(n, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(rng);
    m.labels[i] = i < (n + 1) / 2 ? 1 : 0;
  }
  return m;
}

}  // namespace toy
