// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/segmentation.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace eegsweep {

void validate(const SegmentSpec& s) {
  if (std::find(kDivisors.begin(), kDivisors.end(), s.divisor) == kDivisors.end())
    throw ConfigError("chunk divisor must be one of 1, 2, 3, 4, 5, 20 (got " +
                      std::to_string(s.divisor) + ")");
  if (s.index < 1 || s.index > s.divisor)
    throw ConfigError("chunk index " + std::to_string(s.index) + " outside 1.." +
                      std::to_string(s.divisor));
}

std::string to_string(const SegmentSpec& s) {
  return std::to_string(s.index) + "/" + std::to_string(s.divisor);
}

SegmentSpec segment_spec_from_string(std::string_view text) {
  const auto slash = text.find('/');
  SegmentSpec s{0, 0};
  auto parse = [&](std::string_view part, int& out) {
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, out);
    return ec == std::errc() && ptr == end && !part.empty();
  };
  if (slash == std::string_view::npos || !parse(text.substr(0, slash), s.index) ||
      !parse(text.substr(slash + 1), s.divisor))
    throw ConfigError("malformed chunk '" + std::string(text) + "' (expected index/j)");
  validate(s);
  return s;
}

std::vector<SegmentSpec> all_segment_specs() {
  std::vector<SegmentSpec> out;
  out.reserve(kSegmentsPerRecording);
  for (int j : kDivisors)
    for (int i = 1; i <= j; ++i) out.push_back({j, i});
  return out;
}

SampleRange segment_range(Eigen::Index n_samples, const SegmentSpec& s) {
  validate(s);
  const Eigen::Index len = n_samples / s.divisor;
  return {static_cast<Eigen::Index>(s.index - 1) * len, len};
}

Recording segment(const Recording& r, const SegmentSpec& s) {
  const SampleRange range = segment_range(r.n_samples(), s);
  const double seconds = static_cast<double>(range.length) / r.sample_rate_hz;
  const double minimum = s.divisor == 20 ? 1.0 : 2.0;
  if (seconds < minimum) {
    std::ostringstream msg;
    msg << "segment " << to_string(s) << " of " << r.subject_id << " is " << seconds
        << " s, below the " << minimum << " s minimum";
    throw DataError(msg.str());
  }
  if (seconds < 2.0) {
    std::ostringstream msg;
    msg << "segment " << to_string(s) << " of " << r.subject_id << " is only " << seconds << " s";
    warn(msg.str());
  }
  if (s.divisor == 1) return r;
  return r.with_samples(r.samples.middleCols(range.first, range.length));
}

std::vector<Segment> all_segments(const Recording& r) {
  std::vector<Segment> out;
  out.reserve(kSegmentsPerRecording);
  for (const auto& s : all_segment_specs()) out.push_back({s, segment(r, s)});
  return out;
}

}  // namespace eegsweep
