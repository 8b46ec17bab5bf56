// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eegsweep/classify.hpp"

namespace eegsweep {

namespace {

double sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

double logloss(const Eigen::VectorXd& margin, const std::vector<int>& y) {
  constexpr double kEps = 1e-15;
  double s = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) {
    const double p = std::clamp(sigmoid(margin(i)), kEps, 1.0 - kEps);
    s -= y[static_cast<std::size_t>(i)] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return s / static_cast<double>(margin.size());
}

struct Builder {
  const Eigen::MatrixXd& x;
  const std::vector<double>& g;
  const std::vector<double>& h;
  const GbtParams& p;
  Tree tree;

  double score(double gs, double hs) const { return gs * gs / (hs + p.lambda); }

  int build(std::vector<std::size_t>& rows, int depth) {
    double gs = 0.0, hs = 0.0;
    for (auto r : rows) {
      gs += g[r];
      hs += h[r];
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[static_cast<std::size_t>(id)].cover = hs;

    int best_f = -1;
    double best_gain = 0.0, best_thr = 0.0;
    if (depth < p.max_depth && rows.size() >= 2) {
      std::vector<std::size_t> order(rows);
      const double parent = score(gs, hs);
      for (Eigen::Index f = 0; f < x.cols(); ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return x(static_cast<Eigen::Index>(a), f) < x(static_cast<Eigen::Index>(b), f) ||
                 (x(static_cast<Eigen::Index>(a), f) == x(static_cast<Eigen::Index>(b), f) && a < b);
        });
        double gl = 0.0, hl = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
          gl += g[order[k]];
          hl += h[order[k]];
          const double v = x(static_cast<Eigen::Index>(order[k]), f);
          const double next = x(static_cast<Eigen::Index>(order[k + 1]), f);
          if (!(v < next)) continue;  // split only between distinct values
          const double hr = hs - hl;
          if (hl < p.min_child_hessian || hr < p.min_child_hessian) continue;
          const double gain = 0.5 * (score(gl, hl) + score(gs - gl, hr) - parent) - p.gamma;
          if (gain > best_gain) {
            best_gain = gain;
            best_f = static_cast<int>(f);
            best_thr = v + (next - v) / 2.0;
          }
        }
      }
    }
    if (best_f < 0) {
      tree.nodes[static_cast<std::size_t>(id)].weight = -p.eta * gs / (hs + p.lambda);
      return id;
    }
    std::vector<std::size_t> left, right;
    for (auto r : rows) (x(static_cast<Eigen::Index>(r), best_f) < best_thr ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    auto& n = tree.nodes[static_cast<std::size_t>(id)];
    n.feature = best_f;
    n.threshold = best_thr;
    n.gain = best_gain;
    n.left = l;
    n.right = r;
    return id;
  }
};

}  // namespace

double Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0)
    i = static_cast<std::size_t>(x(nodes[i].feature) < nodes[i].threshold ? nodes[i].left : nodes[i].right);
  return nodes[i].weight;
}

Eigen::VectorXd GbtModel::margin(const Eigen::MatrixXd& x) const {
  if (x.cols() != n_features) throw DataError("feature count mismatch for boosted-tree model");
  Eigen::VectorXd m = Eigen::VectorXd::Constant(x.rows(), base_margin);
  for (const auto& t : trees)
    for (Eigen::Index i = 0; i < x.rows(); ++i) m(i) += t.predict(x.row(i));
  return m;
}

Eigen::VectorXd GbtModel::predict_proba(const Eigen::MatrixXd& x) const {
  return margin(x).unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<int> GbtModel::predict(const Eigen::MatrixXd& x) const {
  const auto m = margin(x);
  std::vector<int> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) out[static_cast<std::size_t>(i)] = m(i) > 0.0 ? 1 : 0;
  return out;
}

std::vector<double> GbtModel::total_gain() const {
  std::vector<double> gain(static_cast<std::size_t>(n_features), 0.0);
  for (const auto& t : trees)
    for (const auto& n : t.nodes)
      if (n.feature >= 0) gain[static_cast<std::size_t>(n.feature)] += n.gain;
  return gain;
}

GbtModel gbt_train(const Eigen::MatrixXd& x, const std::vector<int>& y, const GbtParams& p,
                   std::optional<EvalSet> eval) {
  if (p.n_rounds < 1) throw ConfigError("n_rounds must be >= 1");
  if (!(p.eta > 0.0 && p.eta <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
  if (!(p.gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (p.max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (!(p.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (static_cast<std::size_t>(x.rows()) != y.size() || x.rows() == 0) throw DataError("rows and labels differ");
  if (!x.allFinite()) throw DataError("non-finite value in training features");
  const auto ones = std::count(y.begin(), y.end(), 1);
  if (ones == 0 || ones == static_cast<long>(y.size())) throw DataError("training labels contain a single class");

  GbtModel model;
  model.params = p;
  model.n_features = static_cast<int>(x.cols());
  const auto n = static_cast<std::size_t>(x.rows());
  Eigen::VectorXd margin = Eigen::VectorXd::Constant(x.rows(), model.base_margin);
  Eigen::VectorXd eval_margin;
  if (eval) eval_margin = Eigen::VectorXd::Constant(eval->x->rows(), model.base_margin);
  std::vector<double> g(n), h(n);
  double best = std::numeric_limits<double>::infinity();

  for (int round = 0; round < p.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double pr = sigmoid(margin(static_cast<Eigen::Index>(i)));
      g[i] = pr - y[i];
      h[i] = std::max(pr * (1.0 - pr), 1e-16);
    }
    Builder b{x, g, h, p, {}};
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    b.build(rows, 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) margin(i) += b.tree.predict(x.row(i));
    model.train_logloss.push_back(logloss(margin, y));
    if (eval) {
      for (Eigen::Index i = 0; i < eval->x->rows(); ++i) eval_margin(i) += b.tree.predict(eval->x->row(i));
      const double l = logloss(eval_margin, *eval->y);
      model.eval_logloss.push_back(l);
      if (l < best) {
        best = l;
        model.best_iteration = round;
      }
    }
    model.trees.push_back(std::move(b.tree));
    if (eval && round - model.best_iteration >= p.early_stopping_rounds) break;
  }
  if (eval) {
    model.trees.resize(static_cast<std::size_t>(model.best_iteration + 1));
  } else {
    model.best_iteration = static_cast<int>(model.trees.size()) - 1;
  }
  return model;
}

std::vector<FeatureImportance> gbt_importance(const GbtModel& m, const std::vector<std::string>& names) {
  const auto gain = m.total_gain();
  std::vector<FeatureImportance> out;
  for (std::size_t f = 0; f < gain.size(); ++f)
    if (gain[f] > 0.0) out.push_back({f < names.size() ? names[f] : "f" + std::to_string(f), gain[f]});
  std::sort(out.begin(), out.end(), [](const FeatureImportance& a, const FeatureImportance& b) {
    return a.gain > b.gain || (a.gain == b.gain && a.feature < b.feature);
  });
  return out;
}

}  // namespace eegsweep
