// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "eegsweep/cleaning.hpp"
#include "eegsweep/dsp.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

namespace {

// (W W^T)^{-1/2} W
Eigen::MatrixXd symmetric_decorrelate(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * w;
}

double band_power(const dsp::Psd& psd, double lo, double hi) {
  double s = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k)
    if (psd.freqs[k] >= lo && psd.freqs[k] < hi) s += psd.power[k];
  return s;
}

}  // namespace

std::string to_string(ComponentLabel l) {
  switch (l) {
    case ComponentLabel::Brain: return "brain";
    case ComponentLabel::Ocular: return "ocular";
    case ComponentLabel::Muscle: return "muscle";
    case ComponentLabel::LineNoise: return "line_noise";
    case ComponentLabel::ChannelNoise: return "channel_noise";
    case ComponentLabel::Other: return "other";
  }
  return "?";
}

IcaDecomposition ica_decompose(const Recording& r, const IcaParams& p) {
  const Eigen::Index nc = r.n_channels();
  const Eigen::Index n = r.n_samples();
  if (n < 2) throw DataError("subject " + r.subject_id + ": too few samples for ICA");
  if (static_cast<std::size_t>(n) < p.min_samples) {
    warn("subject " + r.subject_id + ": ICA on " + std::to_string(n) + " samples (< " +
         std::to_string(p.min_samples) + "); the decomposition may be unreliable");
  }

  IcaDecomposition d;
  d.meta = r.with_samples(SignalMatrix());
  d.channel_means = r.samples.rowwise().mean();
  const Eigen::MatrixXd centred = r.samples.colwise() - d.channel_means;

  // PCA whitening on the directions that cover the requested variance share.
  const Eigen::MatrixXd cov = (centred * centred.transpose()) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd evals = eig.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd evecs = eig.eigenvectors().rowwise().reverse();
  const double total = evals.sum();
  Eigen::Index k = 0;
  if (total > 0.0) {
    double cum = 0.0;
    while (k < nc) {
      cum += evals(k);
      ++k;
      if (cum >= p.variance_coverage * total) break;
    }
    while (k > 0 && evals(k - 1) <= 1e-12 * evals(0)) --k;
  }
  if (k == 0) {
    d.unmixing = Eigen::MatrixXd::Zero(0, nc);
    d.mixing = Eigen::MatrixXd::Zero(nc, 0);
    d.sources = SignalMatrix(0, n);
    d.converged = true;
    return d;
  }
  const Eigen::MatrixXd e = evecs.leftCols(k);
  const Eigen::VectorXd dk = evals.head(k);
  const Eigen::MatrixXd whiten = dk.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose();
  const Eigen::MatrixXd z = whiten * centred;

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd w(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) w(i, j) = normal(rng);
  w = symmetric_decorrelate(w);

  Eigen::MatrixXd best = w;
  double best_lim = std::numeric_limits<double>::infinity();
  const double inv_n = 1.0 / static_cast<double>(n);
  int it = 0;
  for (; it < p.max_iter; ++it) {
    Eigen::MatrixXd g = w * z;
    Eigen::VectorXd gprime_mean(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      double s = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        const double th = std::tanh(g(i, t));
        g(i, t) = th;
        s += 1.0 - th * th;
      }
      gprime_mean(i) = s * inv_n;
    }
    Eigen::MatrixXd w_new = (g * z.transpose()) * inv_n - gprime_mean.asDiagonal() * w;
    w_new = symmetric_decorrelate(w_new);
    const double lim =
        ((w_new * w.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
    w = w_new;
    if (lim < best_lim) {
      best_lim = lim;
      best = w;
    }
    if (lim < p.tol) {
      d.converged = true;
      ++it;
      break;
    }
  }
  d.iterations = it;
  if (!d.converged) {
    w = best;
    warn("subject " + r.subject_id + ": FastICA did not converge in " +
         std::to_string(p.max_iter) + " iterations");
  }

  Eigen::MatrixXd unmixing = w * whiten;
  Eigen::MatrixXd mixing = e * dk.cwiseSqrt().asDiagonal() * w.transpose();

  // Deterministic ordering: largest back-projected variance first, largest
  // topography entry positive.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd power = mixing.colwise().squaredNorm().transpose();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return power(a) > power(b); });
  d.unmixing.resize(k, nc);
  d.mixing.resize(nc, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    Eigen::Index imax = 0;
    mixing.col(src).cwiseAbs().maxCoeff(&imax);
    const double sign = mixing(imax, src) < 0.0 ? -1.0 : 1.0;
    d.mixing.col(i) = sign * mixing.col(src);
    d.unmixing.row(i) = sign * unmixing.row(src);
  }
  d.sources = d.unmixing * centred;
  return d;
}

std::vector<ComponentLabel> label_components(const IcaDecomposition& d, const Montage& montage,
                                             double fs, const LabelerThresholds& t) {
  std::vector<ComponentLabel> labels;
  const auto& names = d.meta.channel_names;
  std::vector<bool> frontal_pole(names.size(), false);
  for (std::size_t c = 0; c < names.size(); ++c) {
    auto idx = montage.index_of(names[c]);
    frontal_pole[c] = idx && (montage.names()[*idx] == "Fp1" || montage.names()[*idx] == "Fp2");
  }
  for (Eigen::Index i = 0; i < d.n_components(); ++i) {
    std::span<const double> src(d.sources.data() + i * d.sources.cols(),
                                static_cast<std::size_t>(d.sources.cols()));
    const auto psd = dsp::welch(src, fs);
    const double nyq = fs / 2.0;
    const double total = band_power(psd, psd.df / 2.0, nyq + psd.df);
    const Eigen::VectorXd col = d.mixing.col(i);
    Eigen::Index imax = 0;
    const double amax = col.cwiseAbs().maxCoeff(&imax);
    const double norm = col.norm();

    ComponentLabel label = ComponentLabel::Brain;
    if (total > 0.0) {
      const double low = band_power(psd, psd.df / 2.0, t.ocular_low_hz) / total;
      bool line = false;
      if (t.line_hz < nyq) {
        std::size_t peak_bin = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
          const double dist = std::abs(psd.freqs[k] - t.line_hz);
          if (dist < best) {
            best = dist;
            peak_bin = k;
          }
        }
        std::vector<double> neighbourhood;
        for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
          const double dist = std::abs(psd.freqs[k] - t.line_hz);
          if (dist <= t.line_neighbourhood_hz && dist > 1.0) neighbourhood.push_back(psd.power[k]);
        }
        if (!neighbourhood.empty()) {
          const double med = median(neighbourhood);
          line = psd.power[peak_bin] >= t.line_peak_ratio * med && psd.power[peak_bin] > 0.0;
        }
      }
      const double muscle = band_power(psd, t.muscle_low_hz, t.muscle_high_hz) / total;
      if (low > t.ocular_low_power_fraction && frontal_pole[static_cast<std::size_t>(imax)]) {
        label = ComponentLabel::Ocular;
      } else if (line) {
        label = ComponentLabel::LineNoise;
      } else if (muscle > t.muscle_power_fraction) {
        label = ComponentLabel::Muscle;
      } else if (norm > 0.0 && amax / norm > t.channel_norm_fraction) {
        label = ComponentLabel::ChannelNoise;
      }
    }
    labels.push_back(label);
  }
  return labels;
}

Recording ica_reconstruct(const IcaDecomposition& d,
                          const std::function<bool(std::size_t, ComponentLabel)>& keep) {
  const Eigen::Index nc = d.mixing.rows();
  const Eigen::Index n = d.sources.cols();
  SignalMatrix out = SignalMatrix::Zero(nc, n);
  for (Eigen::Index i = 0; i < d.n_components(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const ComponentLabel l = idx < d.labels.size() ? d.labels[idx] : ComponentLabel::Other;
    if (keep(idx, l)) out.noalias() += d.mixing.col(i) * d.sources.row(i);
  }
  out.colwise() += d.channel_means;
  return d.meta.with_samples(std::move(out));
}

}  // namespace eegsweep
