// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/recording.hpp"

#include <cmath>
#include <sstream>

namespace eegsweep {

Recording Recording::with_samples(SignalMatrix s) const {
  Recording out;
  out.subject_id = subject_id;
  out.label = label;
  out.sample_rate_hz = sample_rate_hz;
  out.channel_names = channel_names;
  out.samples = std::move(s);
  return out;
}

Recording Recording::select_channels(const std::vector<std::string>& names) const {
  Recording out = with_samples(SignalMatrix(static_cast<Eigen::Index>(names.size()), n_samples()));
  out.channel_names = names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto c = channel_index(names[i]);
    if (!c) throw DataError("recording " + subject_id + " has no channel '" + names[i] + "'");
    out.samples.row(static_cast<Eigen::Index>(i)) = samples.row(*c);
  }
  return out;
}

std::optional<Eigen::Index> Recording::channel_index(std::string_view name) const {
  for (std::size_t i = 0; i < channel_names.size(); ++i)
    if (channel_names[i] == name) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

Montage::Montage(std::vector<std::string> names, std::vector<Point2> coords)
    : names_(std::move(names)), coords_(std::move(coords)) {}

const Montage& Montage::standard_1020() {
  // Outer ring at 72 deg from the vertex, inner ring at 36 deg; F3/F4/P3/P4 are
  // great-circle midpoints between the midline and outer-ring neighbours.
  static const Montage m(
      {"Fp1", "Fp2", "F3", "F4", "F7", "F8", "Fz", "C3", "C4", "Cz",
       "T7", "T8", "P3", "P4", "P7", "P8", "Pz", "O1", "O2"},
      {{-0.247213595499958, 0.760845213036123},
       {0.247213595499958, 0.760845213036123},
       {-0.315759975449344, 0.470632207475511},
       {0.315759975449344, 0.470632207475511},
       {-0.647213595499958, 0.470228201833979},
       {0.647213595499958, 0.470228201833979},
       {0.0, 0.4},
       {-0.4, 0.0},
       {0.4, 0.0},
       {0.0, 0.0},
       {-0.8, 0.0},
       {0.8, 0.0},
       {-0.315759975449344, -0.470632207475511},
       {0.315759975449344, -0.470632207475511},
       {-0.647213595499958, -0.470228201833979},
       {0.647213595499958, -0.470228201833979},
       {0.0, -0.4},
       {-0.247213595499958, -0.760845213036123},
       {0.247213595499958, -0.760845213036123}});
  return m;
}

std::optional<std::size_t> Montage::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t Montage::require_index(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw ConfigError("unknown channel label '" + std::string(name) + "'");
}

std::vector<Violation> validate_recording(const Recording& r) {
  std::vector<Violation> out;
  if (static_cast<Eigen::Index>(r.channel_names.size()) != r.samples.rows()) {
    out.push_back({"row count " + std::to_string(r.samples.rows()) + " != channel count " +
                       std::to_string(r.channel_names.size()),
                   std::nullopt, std::nullopt});
  }
  if (!(r.sample_rate_hz > 0.0) || !std::isfinite(r.sample_rate_hz)) {
    out.push_back({"sample rate must be positive", std::nullopt, std::nullopt});
  } else if (static_cast<double>(r.n_samples()) < 2.0 * r.sample_rate_hz) {
    std::ostringstream os;
    os << "duration below 2 s (" << r.n_samples() << " samples at " << r.sample_rate_hz << " Hz)";
    out.push_back({os.str(), std::nullopt, std::nullopt});
  }
  for (Eigen::Index c = 0; c < r.samples.rows(); ++c) {
    for (Eigen::Index t = 0; t < r.samples.cols(); ++t) {
      if (!std::isfinite(r.samples(c, t))) {
        const std::string name = c < static_cast<Eigen::Index>(r.channel_names.size())
                                     ? r.channel_names[static_cast<std::size_t>(c)]
                                     : std::to_string(c);
        out.push_back({"non-finite sample on " + name, c, t});
      }
    }
  }
  return out;
}

std::string to_string(const Violation& v) {
  std::ostringstream os;
  os << v.what;
  if (v.channel) os << " at channel " << *v.channel;
  if (v.sample) os << ", sample " << *v.sample;
  return os.str();
}

}  // namespace eegsweep
