// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegsweep/cleaning.hpp"
#include "eegsweep/dsp.hpp"
#include "eegsweep/recording.hpp"
#include "eegsweep/segmentation.hpp"

namespace eegsweep {

inline constexpr std::size_t kFeatureCount = 53;
using FeatureVector = std::array<double, kFeatureCount>;

/// Canonical feature names in output order.
const std::array<std::string_view, kFeatureCount>& feature_names();
/// Position of `name` in the canonical order; throws ConfigError if unknown.
std::size_t feature_index(std::string_view name);

struct FeatureParams {
  double quantile_q = 0.75;
  dsp::WelchParams welch;
  /// Delta, theta, alpha, beta edges: [e0,e1), [e1,e2), [e2,e3), [e3,e4).
  std::array<double, 5> band_edges{0.5, 4.0, 8.0, 13.0, 30.0};
  /// Denominator range of relative band power, spectral entropy and edge frequency.
  double total_low_hz = 0.5;
  double total_high_hz = 40.0;
  double psd_fit_low_hz = 1.0;
  double psd_fit_high_hz = 40.0;
  double edge_fraction = 0.95;
  int higuchi_kmax = 10;
  int apen_m = 2;
  double apen_r_fraction = 0.2;
  double energy_transition_hz = 1.0;
};

nlohmann::json to_json(const FeatureParams& p);

// ---------------------------------------------------------------------------
// Individual feature families. Degenerate inputs (zero variance, empty bands)
// give 0 rather than NaN unless stated otherwise.

struct Hjorth {
  double mobility = 0.0;
  double complexity = 0.0;
};
/// Time domain: mobility = sqrt(var(dx)/var(x)), complexity = mobility(dx)/mobility(x).
Hjorth hjorth(std::span<const double> x);
/// Spectral moments m_k = sum f^k P(f) over all bins.
Hjorth hjorth_spectral(const dsp::Psd& psd);

/// Higuchi curve-length dimension, clamped to [1, 2]; 1 for a constant signal.
double higuchi_fd(std::span<const double> x, int kmax = 10);
/// Katz dimension with n = N - 1 steps; 1 for a constant signal.
double katz_fd(std::span<const double> x);
/// Rescaled-range Hurst exponent with the Anis-Lloyd small-sample correction.
double hurst_exponent(std::span<const double> x);
/// ApEn(m, r = r_fraction * std), Chebyshev distance, self-matches counted.
double approximate_entropy(std::span<const double> x, int m = 2, double r_fraction = 0.2);
/// First lag whose autocorrelation is <= 0, in seconds (>= 1/fs).
double decorrelation_time(std::span<const double> x, double fs);
/// Sign changes between consecutive non-zero samples.
double zero_crossings(std::span<const double> x);
double line_length(std::span<const double> x);

/// Relative power of the four bands over [total_low, total_high).
std::array<double, 4> band_powers(const dsp::Psd& psd, const FeatureParams& p = {});
/// Normalised Shannon entropy of the PSD over [total_low, total_high).
double spectral_entropy(const dsp::Psd& psd, const FeatureParams& p = {});
/// Lowest bin frequency at which the cumulative [total_low, total_high) power reaches the edge fraction.
double spectral_edge_frequency(const dsp::Psd& psd, const FeatureParams& p = {});

struct PsdFit {
  double intercept = 0.0;
  double slope = 0.0;
  double mse = 0.0;
  double r2 = 0.0;
};
/// OLS of log10 P on log10 f over [low, high] Hz, zero-power bins excluded.
PsdFit psd_fit(const dsp::Psd& psd, double low_hz = 1.0, double high_hz = 40.0);

/// Mean square of the band-passed signal per band (absolute).
std::array<double, 4> band_energies(std::span<const double> x, double fs, const FeatureParams& p = {});

// ---------------------------------------------------------------------------
// Wavelets

/// Daubechies-4 (8-tap) analysis filters.
const std::array<double, 8>& db4_lowpass();
const std::array<double, 8>& db4_highpass();

struct WaveletDecomposition {
  std::vector<std::vector<double>> details;  // d1 (finest) .. dL
  std::vector<double> approximation;         // aL
};
/// Periodised DWT; odd-length levels are extended by repeating the last sample.
/// Throws DataError when the signal is shorter than 2^levels + 8.
WaveletDecomposition dwt(std::span<const double> x, int levels = 6);
/// Teager-Kaiser operator x_n^2 - x_{n-1} x_{n+1} on the interior samples.
std::vector<double> tkeo(std::span<const double> x);

struct WaveletFeatures {
  std::array<double, 6> energy{};     // mean square of d1..d6
  std::array<double, 14> tkeo_stats{};  // (mean, std) for d1..d6, a6
};
WaveletFeatures wavelet_features(std::span<const double> x);

// ---------------------------------------------------------------------------
// Extraction

/// All 53 features of one channel. Requires >= 2 s of finite samples (DataError otherwise).
FeatureVector extract_channel(std::span<const double> x, double fs, const FeatureParams& p = {});

struct FeatureMatrix {
  std::vector<std::string> subject_ids;
  std::vector<std::string> columns;  // "CH:feature"
  Eigen::MatrixXd values;            // subjects x columns
  std::vector<int> labels;           // 0 = TD, 1 = ADHD

  Eigen::Index n_rows() const { return values.rows(); }
  Eigen::Index n_cols() const { return values.cols(); }
  /// Column subset in the given order; labels and ids carried over.
  FeatureMatrix select_columns(const std::vector<std::size_t>& idx) const;
  FeatureMatrix select_rows(const std::vector<std::size_t>& idx) const;
};

/// Per-channel feature block for one recording: channels x 53.
Eigen::MatrixXd extract_recording(const Recording& r, const FeatureParams& p = {},
                                  Exec exec = Exec::Parallel);

/// Rows follow the cohort order, columns are channel-major in canonical feature order.
/// Recordings are cleaned with `pipeline`, then segmented, then restricted to `channels`.
FeatureMatrix build_feature_matrix(const std::vector<Recording>& cohort,
                                   const CleaningPipeline& pipeline, const SegmentSpec& chunk,
                                   const std::vector<std::string>& channels,
                                   const FeatureParams& p = {}, Exec exec = Exec::Parallel);

/// Assembles a FeatureMatrix from precomputed per-subject blocks (channels x 53,
/// montage order), for the given channel subset.
FeatureMatrix assemble_feature_matrix(const std::vector<Recording>& cohort,
                                      const std::vector<Eigen::MatrixXd>& blocks,
                                      const std::vector<std::string>& channels);

/// Header: subject_id, CH:feature..., label.
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

}  // namespace eegsweep
