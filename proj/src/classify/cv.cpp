// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "eegsweep/classify.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

using nlohmann::json;

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Fisher-Yates with an unbiased bounded draw; identical on every platform.
void shuffle(std::vector<std::size_t>& v, std::uint64_t seed) {
  std::uint64_t state = seed;
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do r = splitmix(state);
    while (r >= limit);
    std::swap(v[i - 1], v[static_cast<std::size_t>(r % bound)]);
  }
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          x(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
  return out;
}

std::vector<int> gather(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(y[r]);
  return out;
}

double sample_sd(const std::vector<double>& v) { return v.size() > 1 ? std::sqrt(variance(v, 1)) : 0.0; }

void emit(const CvOptions& opt, int fold, const char* stage, const std::vector<std::size_t>& rows,
          const std::vector<std::size_t>& held_out) {
  if (opt.on_fit) opt.on_fit(FitEvent{fold, stage, &rows, &held_out});
}

struct FoldData {
  std::vector<std::size_t> test_rows;
  std::vector<std::size_t> fit_rows;      // training fold
  std::vector<std::size_t> gbt_fit_rows;  // training fold minus the early-stopping carve-out
  std::vector<std::size_t> eval_rows;     // GBT early-stopping rows (may be empty)
  std::vector<std::size_t> columns;
  std::string error;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix(s);
  s = h ^ a;
  h = splitmix(s);
  s = h ^ b;
  return splitmix(s);
}

std::vector<int> stratified_folds(const std::vector<int>& y, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("need at least 2 folds");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  std::vector<std::size_t> order;
  for (auto& [label, rows] : by_class) {
    if (rows.size() < static_cast<std::size_t>(k))
      throw DataError("class " + std::to_string(label) + " has " + std::to_string(rows.size()) +
                      " members; cannot stratify " + std::to_string(k) + " folds");
    shuffle(rows, derive_seed(seed, static_cast<std::uint64_t>(label)));
    order.insert(order.end(), rows.begin(), rows.end());
  }
  std::vector<int> fold(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) fold[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return fold;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<std::size_t>& rows, const std::vector<int>& y, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("split fraction must lie in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (auto r : rows) by_class[y.at(r)].push_back(r);
  const auto n = rows.size();
  const auto n_carve = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  // Largest-remainder apportionment of the carve-out among classes.
  std::vector<std::pair<int, std::size_t>> quota;
  std::vector<std::pair<double, int>> remainder;
  std::size_t assigned = 0;
  for (const auto& [label, members] : by_class) {
    const double exact = static_cast<double>(members.size()) * static_cast<double>(n_carve) / static_cast<double>(n);
    const auto q = static_cast<std::size_t>(std::floor(exact));
    quota.emplace_back(label, q);
    remainder.emplace_back(exact - static_cast<double>(q), label);
    assigned += q;
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n_carve && r < remainder.size(); ++r, ++assigned)
    for (auto& [label, q] : quota)
      if (label == remainder[r].second) ++q;
  std::vector<std::size_t> keep, carve;
  for (auto& [label, q] : quota) {
    auto members = by_class[label];
    shuffle(members, derive_seed(seed, static_cast<std::uint64_t>(label), 0x5311));
    carve.insert(carve.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(q));
    keep.insert(keep.end(), members.begin() + static_cast<std::ptrdiff_t>(q), members.end());
  }
  std::sort(keep.begin(), keep.end());
  std::sort(carve.begin(), carve.end());
  return {keep, carve};
}

CvResult cross_validate(const FeatureMatrix& m, const std::vector<ModelConfig>& grid, const CvOptions& opt) {
  if (grid.empty()) throw ConfigError("empty hyperparameter grid");
  for (const auto& c : grid) validate(c);
  if (m.n_cols() == 0) throw DataError("feature matrix has no columns");
  if (static_cast<std::size_t>(m.n_rows()) != m.labels.size()) throw DataError("label count does not match rows");
  if (!m.values.allFinite()) throw DataError("non-finite value in feature matrix");
  const auto folds = stratified_folds(m.labels, opt.n_folds, derive_seed(opt.seed, 0xF01D));
  const bool any_gbt = std::any_of(grid.begin(), grid.end(), [](const auto& c) { return c.kind == ClassifierKind::GBT; });

  std::vector<FoldData> fd(static_cast<std::size_t>(opt.n_folds));
  for (int f = 0; f < opt.n_folds; ++f) {
    auto& d = fd[static_cast<std::size_t>(f)];
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == f ? d.test_rows : train).push_back(i);
    if (opt.in_fold_selection) {
      emit(opt, f, "selection", train, d.test_rows);
      try {
        d.columns = selection_report(m.select_rows(train), *opt.in_fold_selection, Exec::Serial).kept();
        if (d.columns.empty()) d.error = "no features selected in training fold " + std::to_string(f + 1);
      } catch (const std::exception& e) {
        d.error = e.what();
      }
    } else {
      d.columns.resize(static_cast<std::size_t>(m.n_cols()));
      std::iota(d.columns.begin(), d.columns.end(), 0);
    }
    d.fit_rows = train;
    if (any_gbt) {
      if (opt.paper_faithful_early_stop) {
        d.eval_rows = d.test_rows;
      } else if (opt.eval_fraction > 0.0) {
        auto [keep, carve] = stratified_split(train, m.labels, opt.eval_fraction, derive_seed(opt.seed, 0xE5, static_cast<std::uint64_t>(f)));
        d.eval_rows = std::move(carve);
        d.gbt_fit_rows = std::move(keep);
      }
    }
  }
  for (const auto& d : fd)
    if (!d.error.empty()) throw DataError(d.error);

  const std::size_t n_tasks = grid.size() * fd.size();
  std::vector<double> acc(n_tasks, 0.0);
  std::vector<Confusion> conf(n_tasks);
  std::vector<std::string> errors(n_tasks);
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
  for (std::int64_t tt = 0; tt < static_cast<std::int64_t>(n_tasks); ++tt) {
    const auto t = static_cast<std::size_t>(tt);
    const auto& cfg = grid[t / fd.size()];
    const auto f = t % fd.size();
    const auto& d = fd[f];
    try {
      const bool gbt = cfg.kind == ClassifierKind::GBT;
      const auto& fit_rows = gbt && !d.gbt_fit_rows.empty() ? d.gbt_fit_rows : d.fit_rows;
      const Eigen::MatrixXd xtr = gather(m.values, fit_rows, d.columns);
      const auto ytr = gather(m.labels, fit_rows);
      std::optional<EvalSet> eval;
      Eigen::MatrixXd xev;
      std::vector<int> yev;
      if (gbt && !d.eval_rows.empty()) {
        xev = gather(m.values, d.eval_rows, d.columns);
        yev = gather(m.labels, d.eval_rows);
        eval = EvalSet{&xev, &yev};
      }
      const auto model = fit_model(cfg, xtr, ytr, eval);
      const auto yte = gather(m.labels, d.test_rows);
      const auto pred = predict(model, gather(m.values, d.test_rows, d.columns));
      acc[t] = accuracy(yte, pred);
      Confusion& c = conf[t];
      for (std::size_t i = 0; i < yte.size(); ++i) {
        if (yte[i] == 1) (pred[i] == 1 ? c.tp : c.fn)++;
        else (pred[i] == 1 ? c.fp : c.tn)++;
      }
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  // Instrumentation after the parallel region keeps the hook single-threaded.
  for (std::size_t f = 0; f < fd.size(); ++f) {
    const auto& d = fd[f];
    emit(opt, static_cast<int>(f), "model", any_gbt && !d.gbt_fit_rows.empty() ? d.gbt_fit_rows : d.fit_rows, d.test_rows);
    if (any_gbt && !d.eval_rows.empty())
      emit(opt, static_cast<int>(f), "early_stopping", d.eval_rows, d.test_rows);
  }

  CvResult r;
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    GridPointResult gp;
    gp.config = grid[g];
    for (std::size_t f = 0; f < fd.size(); ++f) gp.fold_accuracies.push_back(acc[g * fd.size() + f]);
    gp.mean_accuracy = mean(gp.fold_accuracies);
    gp.spread = sample_sd(gp.fold_accuracies);
    r.grid.push_back(gp);
    const auto& b = r.grid[best];
    if (g > 0 && (gp.mean_accuracy > b.mean_accuracy ||
                  (gp.mean_accuracy == b.mean_accuracy && gp.config < b.config)))
      best = g;
  }
  r.fold_accuracies = r.grid[best].fold_accuracies;
  r.mean_accuracy = r.grid[best].mean_accuracy;
  r.spread = r.grid[best].spread;
  r.best_config = r.grid[best].config;
  for (std::size_t f = 0; f < fd.size(); ++f) r.confusion.push_back(conf[best * fd.size() + f]);
  if (opt.in_fold_selection)
    for (const auto& d : fd) r.selected_per_fold.push_back(d.columns.size());
  return r;
}

FinalModel train_final(const FeatureMatrix& m, const ModelConfig& cfg, std::uint64_t split_seed, double test_fraction) {
  validate(cfg);
  if (m.n_cols() == 0) throw DataError("feature matrix has no columns");
  std::vector<std::size_t> all(static_cast<std::size_t>(m.n_rows()));
  std::iota(all.begin(), all.end(), 0);
  FinalModel out;
  out.config = cfg;
  out.feature_names = m.columns;
  std::tie(out.train_rows, out.test_rows) = [&] {
    auto [keep, carve] = stratified_split(all, m.labels, test_fraction, derive_seed(split_seed, 0x7E57));
    return std::pair{keep, carve};
  }();
  std::vector<std::size_t> cols(static_cast<std::size_t>(m.n_cols()));
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<std::size_t> fit_rows = out.train_rows;
  std::optional<EvalSet> eval;
  Eigen::MatrixXd xev;
  std::vector<int> yev;
  if (cfg.kind == ClassifierKind::GBT) {
    auto [keep, carve] = stratified_split(out.train_rows, m.labels, 0.2, derive_seed(split_seed, 0xE5));
    fit_rows = keep;
    xev = gather(m.values, carve, cols);
    yev = gather(m.labels, carve);
    eval = EvalSet{&xev, &yev};
  }
  out.model = fit_model(cfg, gather(m.values, fit_rows, cols), gather(m.labels, fit_rows), eval);
  out.holdout_accuracy =
      accuracy(gather(m.labels, out.test_rows), predict(out.model, gather(m.values, out.test_rows, cols)));
  if (const auto* g = std::get_if<GbtModel>(&out.model)) out.importance = gbt_importance(*g, m.columns);
  return out;
}

json to_json(const CvResult& r) {
  json grid = json::array();
  for (const auto& g : r.grid)
    grid.push_back({{"config", to_json(g.config)},
                    {"hyperparameters", g.config.describe()},
                    {"fold_accuracies", g.fold_accuracies},
                    {"mean_accuracy", g.mean_accuracy},
                    {"spread", g.spread}});
  json conf = json::array();
  for (const auto& c : r.confusion) conf.push_back({{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}});
  json j{{"mean_accuracy", r.mean_accuracy},
         {"spread", r.spread},
         {"spread_definition", "sample standard deviation of fold accuracies"},
         {"fold_accuracies", r.fold_accuracies},
         {"best_config", to_json(r.best_config)},
         {"best_hyperparameters", r.best_config.describe()},
         {"confusion", conf},
         {"grid", grid}};
  if (!r.selected_per_fold.empty()) j["selected_per_fold"] = r.selected_per_fold;
  return j;
}

}  // namespace eegsweep
