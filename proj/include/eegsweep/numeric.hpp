// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace eegsweep {

double mean(std::span<const double> x);
/// ddof = 0 gives the population variance, ddof = 1 the sample variance.
double variance(std::span<const double> x, int ddof = 0);

/// Linear-interpolation quantile (Hyndman-Fan type 7), q in [0, 1].
double quantile(std::span<const double> x, double q);
double median(std::span<const double> x);
/// Median absolute deviation (unscaled).
double mad(std::span<const double> x);

/// Pearson correlation; 0 when either input has zero variance.
double correlation(std::span<const double> a, std::span<const double> b);
double rms(std::span<const double> x);

/// 64-bit FNV-1a, used for content-addressed cache keys.
class Fnv1a {
 public:
  Fnv1a& bytes(const void* data, std::size_t n);
  Fnv1a& str(std::string_view s);
  Fnv1a& f64(double v);
  Fnv1a& u64(std::uint64_t v);
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ull;
};

}  // namespace eegsweep
