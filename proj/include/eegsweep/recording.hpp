// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegsweep/core.hpp"

namespace eegsweep {

enum class Label : int { TD = 0, ADHD = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }

/// One subject's multichannel recording.
struct Recording {
  std::string subject_id;
  Label label = Label::TD;
  double sample_rate_hz = 0.0;
  std::vector<std::string> channel_names;
  SignalMatrix samples;  // channels x T

  Eigen::Index n_channels() const { return samples.rows(); }
  Eigen::Index n_samples() const { return samples.cols(); }
  double duration_s() const { return static_cast<double>(n_samples()) / sample_rate_hz; }

  std::span<const double> channel(Eigen::Index c) const {
    return {samples.data() + c * samples.cols(), static_cast<std::size_t>(samples.cols())};
  }
  std::span<double> channel(Eigen::Index c) {
    return {samples.data() + c * samples.cols(), static_cast<std::size_t>(samples.cols())};
  }

  /// Same metadata, new samples.
  Recording with_samples(SignalMatrix s) const;
  std::optional<Eigen::Index> channel_index(std::string_view name) const;
  /// Sub-recording with the named channels, in the given order. DataError on an unknown name.
  Recording select_channels(const std::vector<std::string>& names) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// The 19-electrode 10-20 montage with azimuthal-equidistant head coordinates
/// (vertex at the origin, nose towards +y, right ear towards +x, equator at r = 1).
class Montage {
 public:
  static constexpr std::size_t kSize = 19;

  static const Montage& standard_1020();

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Point2>& coords() const { return coords_; }
  std::size_t size() const { return names_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Throws ConfigError for labels outside the montage.
  std::size_t require_index(std::string_view name) const;
  Point2 coord(std::string_view name) const { return coords_[require_index(name)]; }

 private:
  Montage(std::vector<std::string> names, std::vector<Point2> coords);
  std::vector<std::string> names_;
  std::vector<Point2> coords_;
};

struct Violation {
  std::string what;
  std::optional<Eigen::Index> channel;
  std::optional<Eigen::Index> sample;
};

/// Empty iff every Recording invariant holds:
/// channel/row agreement, positive rate, at least 2 s of data, finite samples.
std::vector<Violation> validate_recording(const Recording& r);

std::string to_string(const Violation& v);

}  // namespace eegsweep
