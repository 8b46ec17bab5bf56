// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace eegsweep {

inline constexpr std::string_view kVersion = "0.1.0";

/// Channels x samples, rows contiguous so a channel can be viewed as a span.
using SignalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Invalid input data (malformed files, violated recording invariants, degenerate samples).
/// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration. The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Execution policy for the data-parallel kernels. Serial is the reference path;
/// Parallel must reproduce it bit for bit.
enum class Exec { Serial, Parallel };

/// Cap on OpenMP worker threads; 0 keeps the runtime default.
void set_max_threads(int n);
int max_threads();

using WarningSink = std::function<void(std::string_view)>;

/// Non-fatal diagnostics (short recordings, ICA non-convergence, ...) go through
/// this sink. Defaults to stderr. Thread-safe.
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace eegsweep
