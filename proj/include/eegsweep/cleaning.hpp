// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eegsweep/recording.hpp"

namespace eegsweep {

enum class CleaningKind { Raw, Filtered, ASR, ICA };

std::string to_string(CleaningKind k);                 // "Raw", "Filtered", "ASR", "ICA"
CleaningKind cleaning_from_string(std::string_view s);  // case-insensitive

// ---------------------------------------------------------------------------
// FIR band-pass

struct FirParams {
  double low_hz = 0.5;
  double high_hz = 40.0;
  double transition_low_hz = 0.5;
  double transition_high_hz = 10.0;
};

/// Hamming windowed-sinc kernel. Cutoffs sit at the middle of each transition
/// band; the length follows the narrower transition.
std::vector<double> design_fir(const FirParams& p, double fs);

/// Zero-phase band-pass of every channel. Throws DataError when the recording
/// is shorter than the kernel.
Recording fir_bandpass(const Recording& r, const FirParams& p);

// ---------------------------------------------------------------------------
// Artifact subspace reconstruction

struct AsrParams {
  double cutoff_k = 20.0;
  double calib_window_s = 1.0;
  double calib_bad_channel_fraction = 0.25;
  double calib_z_low = -3.5;
  double calib_z_high = 5.5;
  double proc_window_s = 0.5;
  double proc_overlap = 0.5;
  double max_dims_fraction = 0.66;  // at most this share of directions is reconstructed per window
  std::size_t min_calib_windows = 10;
};

struct AsrModel {
  Eigen::MatrixXd mixing_sqrt;  // symmetric square root of the calibration covariance
  Eigen::MatrixXd directions;   // principal directions (columns), ascending variance
  Eigen::VectorXd thresholds;   // RMS threshold per direction
  std::vector<bool> calib_accepted;  // per calibration window
  std::size_t n_windows = 0;
  std::size_t n_accepted = 0;
};

AsrModel asr_calibrate(const Recording& r, const AsrParams& p);

/// Per-window diagnostics of asr_process, mainly for tests and provenance.
struct AsrProcessStats {
  std::size_t n_windows = 0;
  std::size_t n_windows_modified = 0;
  std::size_t n_directions_removed = 0;
};

Recording asr_process(const Recording& r, const AsrModel& model, const AsrParams& p,
                      AsrProcessStats* stats = nullptr);

// ---------------------------------------------------------------------------
// ICA

enum class ComponentLabel { Brain, Ocular, Muscle, LineNoise, ChannelNoise, Other };
std::string to_string(ComponentLabel l);

struct LabelerThresholds {
  double ocular_low_hz = 3.0;
  double ocular_low_power_fraction = 0.6;
  double line_hz = 50.0;
  double line_peak_ratio = 10.0;
  double line_neighbourhood_hz = 5.0;
  double muscle_low_hz = 20.0;
  double muscle_high_hz = 45.0;
  double muscle_power_fraction = 0.6;
  double channel_norm_fraction = 0.9;
};

struct IcaParams {
  int max_iter = 500;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  double variance_coverage = 0.9999;
  std::size_t min_samples = 7600;  // below this a warning is emitted
  LabelerThresholds labeler;
};

struct IcaDecomposition {
  Eigen::MatrixXd unmixing;  // components x channels (acts on mean-removed data)
  Eigen::MatrixXd mixing;    // channels x components
  SignalMatrix sources;      // components x T
  Eigen::VectorXd channel_means;
  std::vector<ComponentLabel> labels;
  bool converged = false;
  int iterations = 0;
  Recording meta;  // subject metadata, empty samples

  Eigen::Index n_components() const { return unmixing.rows(); }
};

/// PCA whitening + symmetric FastICA (logcosh contrast). Components are ordered
/// by back-projected variance and sign-normalised, so the result is deterministic
/// for a fixed seed.
IcaDecomposition ica_decompose(const Recording& r, const IcaParams& p);

/// Rule-based component labelling (spectral shape + topography).
std::vector<ComponentLabel> label_components(const IcaDecomposition& d, const Montage& montage,
                                             double sample_rate_hz,
                                             const LabelerThresholds& t = {});

/// Back-projection of the kept components plus the channel means.
Recording ica_reconstruct(const IcaDecomposition& d,
                          const std::function<bool(std::size_t, ComponentLabel)>& keep);

// ---------------------------------------------------------------------------
// Pipelines

struct CleaningPipeline {
  CleaningKind kind = CleaningKind::Raw;
  FirParams fir;
  AsrParams asr;
  IcaParams ica;
};

/// What a pipeline run did, for provenance sidecars.
struct CleaningReport {
  std::optional<std::size_t> asr_calib_windows;
  std::optional<std::size_t> asr_calib_accepted;
  std::optional<std::size_t> asr_windows_modified;
  std::vector<ComponentLabel> ica_labels;
  std::optional<bool> ica_converged;
};

Recording run_pipeline(const Recording& r, const CleaningPipeline& p,
                       CleaningReport* report = nullptr);

}  // namespace eegsweep
