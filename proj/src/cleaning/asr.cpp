// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eegsweep/cleaning.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

namespace {

constexpr double kMadToSigma = 1.4826;

void check_params(const AsrParams& p) {
  if (!(p.cutoff_k > 0.0)) throw ConfigError("ASR cutoff_k must be positive");
  if (!(p.proc_overlap > 0.0 && p.proc_overlap < 1.0))
    throw ConfigError("ASR proc_overlap must lie in (0, 1)");
  if (!(p.calib_window_s > 0.0 && p.proc_window_s > 0.0))
    throw ConfigError("ASR window lengths must be positive");
  if (!(p.calib_z_low < p.calib_z_high)) throw ConfigError("ASR z bounds must be ordered");
}

// Robust z-score against the median / scaled MAD of the population.
double robust_z(double v, double med, double scale) {
  if (scale > 0.0) return (v - med) / scale;
  if (v == med) return 0.0;
  return v > med ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
}

}  // namespace

AsrModel asr_calibrate(const Recording& r, const AsrParams& p) {
  check_params(p);
  const Eigen::Index nc = r.n_channels();
  const Eigen::Index win = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(p.calib_window_s * r.sample_rate_hz)));
  const Eigen::Index n_windows = r.n_samples() / win;
  if (static_cast<std::size_t>(n_windows) < p.min_calib_windows) {
    throw DataError("subject " + r.subject_id + ": insufficient clean calibration data (" +
                    std::to_string(n_windows) + " windows < " +
                    std::to_string(p.min_calib_windows) + ")");
  }

  // Window RMS per channel, then robust z-scores across windows.
  Eigen::MatrixXd wrms(nc, n_windows);
  for (Eigen::Index c = 0; c < nc; ++c)
    for (Eigen::Index w = 0; w < n_windows; ++w)
      wrms(c, w) = std::sqrt(r.samples.row(c).segment(w * win, win).squaredNorm() /
                             static_cast<double>(win));

  std::vector<int> bad_count(static_cast<std::size_t>(n_windows), 0);
  for (Eigen::Index c = 0; c < nc; ++c) {
    std::vector<double> row(static_cast<std::size_t>(n_windows));
    for (Eigen::Index w = 0; w < n_windows; ++w) row[static_cast<std::size_t>(w)] = wrms(c, w);
    const double med = median(row);
    const double scale = kMadToSigma * mad(row);
    for (Eigen::Index w = 0; w < n_windows; ++w) {
      const double z = robust_z(wrms(c, w), med, scale);
      if (z < p.calib_z_low || z > p.calib_z_high) ++bad_count[static_cast<std::size_t>(w)];
    }
  }

  AsrModel model;
  model.n_windows = static_cast<std::size_t>(n_windows);
  model.calib_accepted.resize(model.n_windows);
  std::vector<Eigen::Index> accepted;
  for (Eigen::Index w = 0; w < n_windows; ++w) {
    const double frac = static_cast<double>(bad_count[static_cast<std::size_t>(w)]) /
                        static_cast<double>(nc);
    const bool ok = frac <= p.calib_bad_channel_fraction;
    model.calib_accepted[static_cast<std::size_t>(w)] = ok;
    if (ok) accepted.push_back(w);
  }
  model.n_accepted = accepted.size();
  if (accepted.size() < p.min_calib_windows) {
    throw DataError("subject " + r.subject_id + ": insufficient clean calibration data (" +
                    std::to_string(accepted.size()) + " clean windows < " +
                    std::to_string(p.min_calib_windows) + ")");
  }

  // Concatenated clean calibration data and its (uncentred) covariance.
  const Eigen::Index n_cal = static_cast<Eigen::Index>(accepted.size()) * win;
  Eigen::MatrixXd cal(nc, n_cal);
  for (std::size_t i = 0; i < accepted.size(); ++i)
    cal.middleCols(static_cast<Eigen::Index>(i) * win, win) =
        r.samples.middleCols(accepted[i] * win, win);
  const Eigen::MatrixXd cov = (cal * cal.transpose()) / static_cast<double>(n_cal);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(0.0);
  model.directions = eig.eigenvectors();
  model.mixing_sqrt =
      model.directions * evals.cwiseSqrt().asDiagonal() * model.directions.transpose();

  // Component RMS over processing-sized windows of the calibration data.
  const Eigen::Index pw = std::max<Eigen::Index>(
      2, static_cast<Eigen::Index>(std::lround(p.proc_window_s * r.sample_rate_hz)));
  const Eigen::Index step = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(static_cast<double>(pw) * (1.0 - p.proc_overlap))));
  const Eigen::MatrixXd comp = model.directions.transpose() * cal;
  model.thresholds.resize(nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    std::vector<double> rms_w;
    for (Eigen::Index s = 0; s + pw <= n_cal; s += step)
      rms_w.push_back(std::sqrt(comp.row(i).segment(s, pw).squaredNorm() / static_cast<double>(pw)));
    if (rms_w.empty()) rms_w.push_back(std::sqrt(comp.row(i).squaredNorm() / static_cast<double>(n_cal)));
    const double mu = median(rms_w);
    const double sigma = kMadToSigma * mad(rms_w);
    model.thresholds(i) = mu + p.cutoff_k * sigma;
  }
  return model;
}

Recording asr_process(const Recording& r, const AsrModel& model, const AsrParams& p,
                      AsrProcessStats* stats) {
  check_params(p);
  const Eigen::Index nc = r.n_channels();
  if (model.mixing_sqrt.rows() != nc) {
    throw DataError("subject " + r.subject_id + ": ASR model channel count " +
                    std::to_string(model.mixing_sqrt.rows()) + " does not match recording (" +
                    std::to_string(nc) + ")");
  }
  const Eigen::Index n = r.n_samples();
  SignalMatrix out = r.samples;
  AsrProcessStats st;
  if (n == 0) {
    if (stats) *stats = st;
    return r.with_samples(std::move(out));
  }
  Eigen::Index win = std::max<Eigen::Index>(
      2, static_cast<Eigen::Index>(std::lround(p.proc_window_s * r.sample_rate_hz)));
  win = std::min(win, n);
  const Eigen::Index step = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(static_cast<double>(win) * (1.0 - p.proc_overlap))));

  std::vector<Eigen::Index> starts;
  for (Eigen::Index s = 0; s + win <= n; s += step) starts.push_back(s);
  if (starts.empty() || starts.back() + win < n) starts.push_back(n - win);

  // Threshold operator: diag(thr) * V^T
  const Eigen::MatrixXd thr_op = model.thresholds.asDiagonal() * model.directions.transpose();
  const auto max_dims = static_cast<Eigen::Index>(std::lround(p.max_dims_fraction * static_cast<double>(nc)));
  const Eigen::Index always_keep = nc - max_dims;

  std::vector<double> weight(static_cast<std::size_t>(win));
  for (Eigen::Index i = 0; i < win; ++i) {
    const double s = std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(win));
    weight[static_cast<std::size_t>(i)] = s * s;
  }

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nc, n);
  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(n);
  std::vector<bool> touched(static_cast<std::size_t>(n), false);

  for (Eigen::Index s : starts) {
    ++st.n_windows;
    const auto block = r.samples.middleCols(s, win);
    const Eigen::MatrixXd cov = (block * block.transpose()) / static_cast<double>(win);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& d = eig.eigenvalues();
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::VectorXd limit = (thr_op * v).colwise().squaredNorm().transpose();
    std::vector<bool> keep(static_cast<std::size_t>(nc));
    Eigen::Index n_removed = 0;
    for (Eigen::Index i = 0; i < nc; ++i) {
      const bool k = d(i) <= limit(i) || i < always_keep;
      keep[static_cast<std::size_t>(i)] = k;
      if (!k) ++n_removed;
    }
    Eigen::MatrixXd recon;
    const bool identity = n_removed == 0;
    if (!identity) {
      ++st.n_windows_modified;
      st.n_directions_removed += static_cast<std::size_t>(n_removed);
      Eigen::MatrixXd kept = v.transpose() * model.mixing_sqrt;
      for (Eigen::Index i = 0; i < nc; ++i)
        if (!keep[static_cast<std::size_t>(i)]) kept.row(i).setZero();
      const Eigen::MatrixXd pinv = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(kept).pseudoInverse();
      recon = model.mixing_sqrt * pinv * v.transpose();
    }
    for (Eigen::Index i = 0; i < win; ++i) {
      const Eigen::Index t = s + i;
      const double w = weight[static_cast<std::size_t>(i)];
      if (identity) {
        acc.col(t) += w * block.col(i);
      } else {
        acc.col(t) += w * (recon * block.col(i));
        touched[static_cast<std::size_t>(t)] = true;
      }
      wsum(t) += w;
    }
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    if (touched[static_cast<std::size_t>(t)]) out.col(t) = acc.col(t) / wsum(t);
  }
  if (stats) *stats = st;
  return r.with_samples(std::move(out));
}

}  // namespace eegsweep
