// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "eegsweep/features.hpp"
#include "eegsweep/io.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

using nlohmann::json;

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static const std::array<std::string_view, kFeatureCount> names{
      "mean", "variance", "std", "ptp_amp", "skewness", "kurtosis", "rms", "quantile_75",
      "hurst_exp", "app_entropy", "decorr_time_s", "hjorth_mobility", "hjorth_complexity",
      "higuchi_fd", "katz_fd", "zero_crossings", "line_length",
      "pow_delta", "pow_theta", "pow_alpha", "pow_beta",
      "hjorth_mobility_spect", "hjorth_complexity_spect",
      "psd_fit_intercept", "psd_fit_slope", "psd_fit_mse", "psd_fit_r2",
      "spect_entropy",
      "energy_delta", "energy_theta", "energy_alpha", "energy_beta",
      "spect_edge_freq_95",
      "wavelet_energy_d1", "wavelet_energy_d2", "wavelet_energy_d3",
      "wavelet_energy_d4", "wavelet_energy_d5", "wavelet_energy_d6",
      "tkeo_mean_d1", "tkeo_std_d1", "tkeo_mean_d2", "tkeo_std_d2", "tkeo_mean_d3", "tkeo_std_d3",
      "tkeo_mean_d4", "tkeo_std_d4", "tkeo_mean_d5", "tkeo_std_d5", "tkeo_mean_d6", "tkeo_std_d6",
      "tkeo_mean_a6", "tkeo_std_a6"};
  return names;
}

std::size_t feature_index(std::string_view name) {
  const auto& n = feature_names();
  const auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end()) throw ConfigError("unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - n.begin());
}

json to_json(const FeatureParams& p) {
  return {{"quantile_q", p.quantile_q},
          {"welch_nperseg", p.welch.nperseg},
          {"welch_overlap", p.welch.overlap},
          {"welch_window", "hamming"},
          {"band_edges_hz", p.band_edges},
          {"total_power_range_hz", {p.total_low_hz, p.total_high_hz}},
          {"psd_fit_range_hz", {p.psd_fit_low_hz, p.psd_fit_high_hz}},
          {"edge_fraction", p.edge_fraction},
          {"higuchi_kmax", p.higuchi_kmax},
          {"apen_m", p.apen_m},
          {"apen_r_fraction", p.apen_r_fraction},
          {"energy_transition_hz", p.energy_transition_hz},
          {"wavelet", "db4, 6 levels, periodization"},
          {"degenerate_sentinel", "0 for undefined ratios; 1 for fractal dimensions"}};
}

FeatureVector extract_channel(std::span<const double> x, double fs, const FeatureParams& p) {
  if (!(fs > 0.0)) throw ConfigError("sample rate must be positive");
  if (static_cast<double>(x.size()) < fs) throw DataError("channel shorter than the 1 s extraction minimum");
  for (double v : x)
    if (!std::isfinite(v)) throw DataError("non-finite sample in channel");

  FeatureVector f{};
  std::size_t i = 0;
  const double mu = mean(x);
  const double var = variance(x);
  const double sd = std::sqrt(var);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  double m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m3 /= static_cast<double>(x.size());
  m4 /= static_cast<double>(x.size());
  f[i++] = mu;
  f[i++] = var;
  f[i++] = sd;
  f[i++] = *hi - *lo;
  f[i++] = var > 0.0 ? m3 / (var * sd) : 0.0;
  f[i++] = var > 0.0 ? m4 / (var * var) - 3.0 : 0.0;
  f[i++] = rms(x);
  f[i++] = quantile(x, p.quantile_q);

  f[i++] = hurst_exponent(x);
  f[i++] = approximate_entropy(x, p.apen_m, p.apen_r_fraction);
  f[i++] = decorrelation_time(x, fs);
  const Hjorth ht = hjorth(x);
  f[i++] = ht.mobility;
  f[i++] = ht.complexity;
  f[i++] = higuchi_fd(x, p.higuchi_kmax);
  f[i++] = katz_fd(x);
  f[i++] = zero_crossings(x);
  f[i++] = line_length(x);

  const dsp::Psd psd = dsp::welch(x, fs, p.welch);
  for (double v : band_powers(psd, p)) f[i++] = v;
  const Hjorth hs = hjorth_spectral(psd);
  f[i++] = hs.mobility;
  f[i++] = hs.complexity;
  const PsdFit fit = psd_fit(psd, p.psd_fit_low_hz, p.psd_fit_high_hz);
  f[i++] = fit.intercept;
  f[i++] = fit.slope;
  f[i++] = fit.mse;
  f[i++] = fit.r2;
  f[i++] = spectral_entropy(psd, p);
  for (double v : band_energies(x, fs, p)) f[i++] = v;
  f[i++] = spectral_edge_frequency(psd, p);

  const WaveletFeatures w = wavelet_features(x);
  for (double v : w.energy) f[i++] = v;
  for (double v : w.tkeo_stats) f[i++] = v;
  return f;
}

Eigen::MatrixXd extract_recording(const Recording& r, const FeatureParams& p, Exec exec) {
  const Eigen::Index nc = r.n_channels();
  Eigen::MatrixXd out(nc, static_cast<Eigen::Index>(kFeatureCount));
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (Eigen::Index c = 0; c < nc; ++c) {
    const FeatureVector f = extract_channel(r.channel(c), r.sample_rate_hz, p);
    for (std::size_t k = 0; k < kFeatureCount; ++k) out(c, static_cast<Eigen::Index>(k)) = f[k];
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::size_t>& idx) const {
  FeatureMatrix m;
  m.subject_ids = subject_ids;
  m.labels = labels;
  m.values.resize(values.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    m.columns.push_back(columns.at(idx[j]));
    m.values.col(static_cast<Eigen::Index>(j)) = values.col(static_cast<Eigen::Index>(idx[j]));
  }
  return m;
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  FeatureMatrix m;
  m.columns = columns;
  m.values.resize(static_cast<Eigen::Index>(idx.size()), values.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    m.subject_ids.push_back(subject_ids.at(idx[i]));
    m.labels.push_back(labels.at(idx[i]));
    m.values.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(idx[i]));
  }
  return m;
}

FeatureMatrix assemble_feature_matrix(const std::vector<Recording>& cohort,
                                      const std::vector<Eigen::MatrixXd>& blocks,
                                      const std::vector<std::string>& channels) {
  if (channels.empty()) throw ConfigError("channel subset is empty");
  if (blocks.size() != cohort.size()) throw ConfigError("one feature block per subject required");
  const Montage& montage = Montage::standard_1020();
  std::vector<std::size_t> rows;
  for (const auto& ch : channels) rows.push_back(montage.require_index(ch));
  FeatureMatrix m;
  const auto& names = feature_names();
  for (const auto& ch : channels)
    for (auto n : names) m.columns.push_back(ch + ":" + std::string(n));
  m.values.resize(static_cast<Eigen::Index>(cohort.size()),
                  static_cast<Eigen::Index>(channels.size() * kFeatureCount));
  for (std::size_t s = 0; s < cohort.size(); ++s) {
    m.subject_ids.push_back(cohort[s].subject_id);
    m.labels.push_back(to_int(cohort[s].label));
    for (std::size_t c = 0; c < rows.size(); ++c)
      m.values.block(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c * kFeatureCount), 1,
                     static_cast<Eigen::Index>(kFeatureCount)) =
          blocks[s].row(static_cast<Eigen::Index>(rows[c]));
  }
  return m;
}

FeatureMatrix build_feature_matrix(const std::vector<Recording>& cohort,
                                   const CleaningPipeline& pipeline, const SegmentSpec& chunk,
                                   const std::vector<std::string>& channels,
                                   const FeatureParams& p, Exec exec) {
  if (channels.empty()) throw ConfigError("channel subset is empty");
  if (cohort.empty()) throw DataError("cohort is empty");
  validate(chunk);
  const Montage& montage = Montage::standard_1020();
  std::vector<std::size_t> rows;
  for (const auto& ch : channels) rows.push_back(montage.require_index(ch));

  std::vector<Eigen::MatrixXd> blocks(cohort.size());
  std::vector<std::string> errors(cohort.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (std::int64_t si = 0; si < static_cast<std::int64_t>(cohort.size()); ++si) {
    const auto s = static_cast<std::size_t>(si);
    try {
      const Recording cleaned = run_pipeline(cohort[s], pipeline);
      const Recording seg = segment(cleaned, chunk);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(montage.size()),
                                                static_cast<Eigen::Index>(kFeatureCount));
      for (std::size_t c : rows) {
        const FeatureVector f = extract_channel(seg.channel(static_cast<Eigen::Index>(c)), seg.sample_rate_hz, p);
        for (std::size_t k = 0; k < kFeatureCount; ++k)
          b(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = f[k];
      }
      blocks[s] = std::move(b);
    } catch (const std::exception& e) {
      errors[s] = cohort[s].subject_id + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  return assemble_feature_matrix(cohort, blocks, channels);
}

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& m) {
  CsvTable t;
  t.header = m.columns;
  t.header.push_back("label");
  for (Eigen::Index r = 0; r < m.n_rows(); ++r) {
    std::vector<std::string> row;
    row.reserve(t.header.size());
    for (Eigen::Index c = 0; c < m.n_cols(); ++c) row.push_back(format_double(m.values(r, c)));
    row.push_back(std::to_string(m.labels[static_cast<std::size_t>(r)]));
    t.rows.push_back(std::move(row));
  }
  write_csv_table(path, t);
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv_table(path);
  if (t.header.empty() || t.header.back() != "label")
    throw DataError(path.filename().string() + ": last column must be 'label'");
  FeatureMatrix m;
  m.columns.assign(t.header.begin(), t.header.end() - 1);
  m.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      bool ok = false;
      const double v = detail::parse_double(t.rows[r][c], ok);
      if (!ok || !std::isfinite(v))
        throw DataError(path.filename().string() + ": bad value at row " + std::to_string(r + 2) +
                        ", column " + m.columns[c]);
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
    const std::string& l = t.rows[r].back();
    if (l != "0" && l != "1")
      throw DataError(path.filename().string() + ": label must be 0 or 1 at row " + std::to_string(r + 2));
    m.labels.push_back(l == "1" ? 1 : 0);
    m.subject_ids.push_back("row" + std::to_string(r + 1));
  }
  return m;
}

}  // namespace eegsweep
