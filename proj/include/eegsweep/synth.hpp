// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegsweep/recording.hpp"

namespace eegsweep {

enum class FeatureAxis { ThetaPower, AlphaPower, Kurtosis };
enum class ArtifactKind { Blink, MuscleBurst, Line50Hz, BadChannel };

std::string to_string(FeatureAxis a);
std::string to_string(ArtifactKind k);
FeatureAxis feature_axis_from_string(std::string_view s);
ArtifactKind artifact_kind_from_string(std::string_view s);

struct ArtifactSpec {
  ArtifactKind kind = ArtifactKind::Blink;
  /// Blink: peak amplitude. Muscle / bad channel: RMS. Line: sinusoid amplitude.
  /// inject_artifact takes it in signal units; generate_cohort treats it as a
  /// multiple of the subject's background RMS.
  double amplitude = 10.0;
  double rate_per_min = 6.0;  // blink / muscle events when onsets_s is empty
  double duration_s = 0.0;    // 0 picks the kind default (blink 0.6 s, muscle 1.0 s)
  std::vector<double> onsets_s;
  std::optional<std::string> channel;  // muscle / bad channel target; random when unset
};

struct Background {
  double pink_amplitude = 10.0;
  /// Sinusoid amplitudes for delta, theta, alpha, beta oscillations per source.
  std::array<double, 4> band_amplitudes{4.0, 3.0, 5.0, 1.5};
  double spatial_sigma = 0.25;  // source spread in head coordinates
  double sensor_noise = 0.05;   // independent per-channel white noise, relative to pink_amplitude
  double subject_jitter = 0.2;  // log-normal sigma of per-subject oscillation amplitudes
};

struct ClassEffect {
  std::string target_channel = "P3";
  FeatureAxis axis = FeatureAxis::ThetaPower;
  double effect_size = 1.0;
};

struct SynthSpec {
  std::size_t n_subjects_per_class = 20;
  double duration_s = 60.0;
  double sample_rate_hz = 128.0;
  Background background;
  ClassEffect class_effect;
  std::vector<ArtifactSpec> artifacts;
  std::uint64_t rng_seed = 1;
};

struct ArtifactEvent {
  ArtifactKind kind;
  std::optional<std::size_t> channel;  // unset: all channels
  Eigen::Index start = 0;              // samples, half-open
  Eigen::Index end = 0;
};

struct GroundTruth {
  std::vector<SignalMatrix> clean;                    // per subject, sample-aligned
  std::vector<std::vector<ArtifactEvent>> events;     // per subject
  std::vector<std::vector<std::uint8_t>> masks;       // per subject: transient artifacts (blink, muscle)
};

struct SynthCohort {
  std::vector<Recording> recordings;
  GroundTruth truth;
};

struct Injection {
  Recording recording;
  std::vector<std::uint8_t> mask;  // 1 where a transient artifact is active
  std::vector<ArtifactEvent> events;
  SignalMatrix contribution;       // recording = input + contribution
};

/// Class-1 subjects come first, then class 0. Subject i uses seed rng_seed + i.
SynthCohort generate_cohort(const SynthSpec& spec, Exec exec = Exec::Parallel);

/// Clean background for one subject (no artifacts).
Recording generate_background(const SynthSpec& spec, std::size_t subject_index, Label label);

Injection inject_artifact(const Recording& r, const ArtifactSpec& a, std::uint64_t rng_seed);

/// Unit-variance noise with a 1/f power spectrum above 0.5 Hz (flat below, no DC).
std::vector<double> pink_noise(std::size_t n, double fs, std::uint64_t seed);

void validate(const SynthSpec& spec);

nlohmann::json to_json(const SynthSpec& s);
SynthSpec synth_spec_from_json(const nlohmann::json& j);
nlohmann::json ground_truth_json(const SynthSpec& spec, const SynthCohort& cohort);

}  // namespace eegsweep
