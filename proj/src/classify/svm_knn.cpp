// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eegsweep/classify.hpp"

namespace eegsweep {

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  s.mean = x.colwise().mean();
  s.scale.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double sd = std::sqrt((x.col(c).array() - s.mean(c)).square().mean());
    s.scale(c) = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw DataError("feature count mismatch for standardizer");
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

namespace {

void check_training(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size() || x.rows() == 0) throw DataError("rows and labels differ");
  if (!x.allFinite()) throw DataError("non-finite value in training features");
  for (int v : y)
    if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
}

double sq_dist(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  return (a - b).squaredNorm();
}

}  // namespace

// ----------------------------------------------------------------------- SVM

SvmModel svm_train(const Eigen::MatrixXd& x_raw, const std::vector<int>& y01, const SvmParams& p) {
  check_training(x_raw, y01);
  if (!(p.c > 0.0)) throw ConfigError("SVM C must be positive");
  if (!(p.tolerance > 0.0)) throw ConfigError("SVM tolerance must be positive");
  const auto ones = std::count(y01.begin(), y01.end(), 1);
  if (ones == 0 || ones == static_cast<long>(y01.size())) throw DataError("training labels contain a single class");

  SvmModel m;
  m.params = p;
  m.scaler = Standardizer::fit(x_raw);
  const Eigen::MatrixXd x = m.scaler.apply(x_raw);
  const Eigen::Index n = x.rows();
  if (p.gamma_rbf > 0.0) {
    m.gamma_used = p.gamma_rbf;
  } else {
    const double var = (x.array() - x.mean()).square().mean();
    m.gamma_used = var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
  }
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) k(i, j) = k(j, i) = std::exp(-m.gamma_used * sq_dist(x.row(i), x.row(j)));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = y01[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;

  // Dual: min 1/2 a'Qa - 1'a, 0 <= a <= C, y'a = 0, with Q = (y y') .* K.
  // Working-set selection uses second-order information (Fan, Chen & Lin 2005).
  constexpr double kTau = 1e-12;
  const double c = p.c;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);
  auto in_up = [&](Eigen::Index t) { return (y(t) > 0 && a(t) < c) || (y(t) < 0 && a(t) > 0); };
  auto in_low = [&](Eigen::Index t) { return (y(t) > 0 && a(t) > 0) || (y(t) < 0 && a(t) < c); };

  for (m.iterations = 0; m.iterations < p.max_iterations; ++m.iterations) {
    Eigen::Index i = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t)
      if (in_up(t) && -y(t) * grad(t) >= gmax) {
        gmax = -y(t) * grad(t);
        i = t;
      }
    Eigen::Index j = -1;
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, y(t) * grad(t));
      const double b = gmax + y(t) * grad(t);
      if (b > 0.0 && i >= 0) {
        double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (quad <= 0.0) quad = kTau;
        const double obj = -b * b / quad;
        if (obj <= best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < p.tolerance) {
      m.converged = true;
      break;
    }
    const double ai = a(i), aj = a(j);
    const double qij = y(i) * y(j) * k(i, j);
    if (y(i) != y(j)) {
      double quad = k(i, i) + k(j, j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = a(i) - a(j);
      a(i) += delta;
      a(j) += delta;
      if (diff > 0) {
        if (a(j) < 0) {
          a(j) = 0;
          a(i) = diff;
        }
      } else if (a(i) < 0) {
        a(i) = 0;
        a(j) = -diff;
      }
      if (diff > 0) {
        if (a(i) > c) {
          a(i) = c;
          a(j) = c - diff;
        }
      } else if (a(j) > c) {
        a(j) = c;
        a(i) = c + diff;
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = a(i) + a(j);
      a(i) -= delta;
      a(j) += delta;
      if (sum > c) {
        if (a(i) > c) {
          a(i) = c;
          a(j) = sum - c;
        }
      } else if (a(j) < 0) {
        a(j) = 0;
        a(i) = sum;
      }
      if (sum > c) {
        if (a(j) > c) {
          a(j) = c;
          a(i) = sum - c;
        }
      } else if (a(i) < 0) {
        a(i) = 0;
        a(j) = sum;
      }
    }
    const double dai = a(i) - ai, daj = a(j) - aj;
    for (Eigen::Index t = 0; t < n; ++t)
      grad(t) += y(t) * (y(i) * k(t, i) * dai + y(j) * k(t, j) * daj);
  }
  if (!m.converged) warn("SVM solver stopped at the iteration limit before reaching tolerance");

  // Threshold from free vectors, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum = 0.0;
  int n_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (a(t) >= c) {
      if (y(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (a(t) <= 0) {
      if (y(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      sum += yg;
      ++n_free;
    }
  }
  m.rho = n_free > 0 ? sum / n_free : (ub + lb) / 2.0;

  std::vector<Eigen::Index> sv;
  for (Eigen::Index t = 0; t < n; ++t)
    if (a(t) > 0.0) sv.push_back(t);
  m.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
  m.coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    m.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(sv[s]);
    m.coef(static_cast<Eigen::Index>(s)) = a(sv[s]) * y(sv[s]);
  }
  return m;
}

Eigen::VectorXd SvmModel::decision(const Eigen::MatrixXd& x_raw) const {
  const Eigen::MatrixXd x = scaler.apply(x_raw);
  Eigen::VectorXd d(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index v = 0; v < support_vectors.rows(); ++v)
      s += coef(v) * std::exp(-gamma_used * sq_dist(support_vectors.row(v), x.row(i)));
    d(i) = s - rho;
  }
  return d;
}

std::vector<int> SvmModel::predict(const Eigen::MatrixXd& x) const {
  const auto d = decision(x);
  std::vector<int> out(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) out[static_cast<std::size_t>(i)] = d(i) > 0.0 ? 1 : 0;
  return out;
}

// ----------------------------------------------------------------------- KNN

KnnModel knn_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, const KnnParams& p) {
  check_training(x, y);
  if (p.k < 1) throw ConfigError("k must be >= 1");
  if (static_cast<Eigen::Index>(p.k) > x.rows()) throw ConfigError("k exceeds the training set size");
  KnnModel m;
  m.params = p;
  m.scaler = Standardizer::fit(x);
  m.train = m.scaler.apply(x);
  m.labels = y;
  return m;
}

std::vector<int> KnnModel::predict(const Eigen::MatrixXd& x_raw) const {
  const Eigen::MatrixXd x = scaler.apply(x_raw);
  const auto k = static_cast<std::size_t>(params.k);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  std::vector<std::pair<double, std::size_t>> d(static_cast<std::size_t>(train.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index t = 0; t < train.rows(); ++t)
      d[static_cast<std::size_t>(t)] = {sq_dist(train.row(t), x.row(i)), static_cast<std::size_t>(t)};
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    int votes = 0;
    for (std::size_t r = 0; r < k; ++r) votes += labels[d[r].second] == 1 ? 1 : -1;
    out[static_cast<std::size_t>(i)] = votes > 0 ? 1 : votes < 0 ? 0 : labels[d[0].second];
  }
  return out;
}

std::vector<int> knn_predict(const Eigen::MatrixXd& train_x, const std::vector<int>& train_y,
                             const Eigen::MatrixXd& test_x, int k) {
  return knn_fit(train_x, train_y, {k}).predict(test_x);
}

}  // namespace eegsweep
