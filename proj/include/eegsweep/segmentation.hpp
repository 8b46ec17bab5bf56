// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "eegsweep/recording.hpp"

namespace eegsweep {

/// Chunk `index` (1-based) of a recording split into `divisor` equal parts.
struct SegmentSpec {
  int divisor = 1;
  int index = 1;

  friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
  friend auto operator<=>(const SegmentSpec&, const SegmentSpec&) = default;
};

inline constexpr std::array<int, 6> kDivisors{1, 2, 3, 4, 5, 20};
inline constexpr std::size_t kSegmentsPerRecording = 35;

/// Throws ConfigError unless divisor is one of kDivisors and 1 <= index <= divisor.
void validate(const SegmentSpec& s);

/// "index/j", e.g. "17/20".
std::string to_string(const SegmentSpec& s);
SegmentSpec segment_spec_from_string(std::string_view s);

/// The 35 chunk specs in (divisor, index) order.
std::vector<SegmentSpec> all_segment_specs();

/// Sample range [first, first + length) selected by `s` for a recording of n samples.
struct SampleRange {
  Eigen::Index first = 0;
  Eigen::Index length = 0;
};
SampleRange segment_range(Eigen::Index n_samples, const SegmentSpec& s);

/// Sub-recording with inherited metadata. Remainder samples are dropped from the
/// tail. Segments must be at least 2 s long; for divisor 20, 1 s is accepted with
/// a warning. Throws DataError below the minimum.
Recording segment(const Recording& r, const SegmentSpec& s);

struct Segment {
  SegmentSpec spec;
  Recording recording;
};

/// All 35 segments in all_segment_specs() order.
std::vector<Segment> all_segments(const Recording& r);

}  // namespace eegsweep
