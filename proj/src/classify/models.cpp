// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <sstream>
#include <tuple>

#include "eegsweep/classify.hpp"
#include "eegsweep/io.hpp"

namespace eegsweep {

using nlohmann::json;

std::string to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::GBT: return "XGB";
    case ClassifierKind::SVM: return "SVM";
    case ClassifierKind::KNN: return "KNN";
  }
  return "?";
}

ClassifierKind classifier_from_string(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "GBT" || u == "XGB" || u == "XGBOOST") return ClassifierKind::GBT;
  if (u == "SVM") return ClassifierKind::SVM;
  if (u == "KNN") return ClassifierKind::KNN;
  throw ConfigError("unknown classifier '" + std::string(s) + "' (expected gbt, svm or knn)");
}

std::string ModelConfig::describe() const {
  std::ostringstream o;
  switch (kind) {
    case ClassifierKind::GBT:
      o << "max_depth=" << gbt.max_depth << ";eta=" << format_double(gbt.eta) << ";gamma=" << format_double(gbt.gamma);
      break;
    case ClassifierKind::SVM:
      o << "C=" << format_double(svm.c) << ";gamma_rbf=" << (svm.gamma_rbf > 0.0 ? format_double(svm.gamma_rbf) : "scale");
      break;
    case ClassifierKind::KNN:
      o << "k=" << knn.k;
      break;
  }
  return o.str();
}

bool ModelConfig::operator<(const ModelConfig& o) const {
  if (kind != o.kind) return kind < o.kind;
  switch (kind) {
    case ClassifierKind::GBT:
      return std::tie(gbt.max_depth, gbt.eta, gbt.gamma) < std::tie(o.gbt.max_depth, o.gbt.eta, o.gbt.gamma);
    case ClassifierKind::SVM:
      return std::tie(svm.c, svm.gamma_rbf) < std::tie(o.svm.c, o.svm.gamma_rbf);
    case ClassifierKind::KNN:
      return knn.k < o.knn.k;
  }
  return false;
}

void validate(const ModelConfig& c) {
  switch (c.kind) {
    case ClassifierKind::GBT:
      if (c.gbt.n_rounds < 1) throw ConfigError("n_rounds must be >= 1");
      if (!(c.gbt.eta > 0.0 && c.gbt.eta <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
      if (!(c.gbt.gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
      if (c.gbt.max_depth < 1) throw ConfigError("max_depth must be >= 1");
      if (c.gbt.early_stopping_rounds < 1) throw ConfigError("early_stopping_rounds must be >= 1");
      break;
    case ClassifierKind::SVM:
      if (!(c.svm.c > 0.0)) throw ConfigError("SVM C must be positive");
      break;
    case ClassifierKind::KNN:
      if (c.knn.k < 1) throw ConfigError("k must be >= 1");
      break;
  }
}

json to_json(const ModelConfig& c) {
  json j{{"classifier", to_string(c.kind)}};
  switch (c.kind) {
    case ClassifierKind::GBT:
      j["n_rounds"] = c.gbt.n_rounds;
      j["early_stopping_rounds"] = c.gbt.early_stopping_rounds;
      j["max_depth"] = c.gbt.max_depth;
      j["eta"] = c.gbt.eta;
      j["gamma"] = c.gbt.gamma;
      j["lambda"] = c.gbt.lambda;
      j["min_child_hessian"] = c.gbt.min_child_hessian;
      break;
    case ClassifierKind::SVM:
      j["C"] = c.svm.c;
      j["gamma_rbf"] = c.svm.gamma_rbf > 0.0 ? json(c.svm.gamma_rbf) : json("scale");
      j["tolerance"] = c.svm.tolerance;
      break;
    case ClassifierKind::KNN:
      j["k"] = c.knn.k;
      break;
  }
  return j;
}

ModelConfig model_config_from_json(const json& j) {
  try {
    ModelConfig c;
    c.kind = classifier_from_string(j.at("classifier").get<std::string>());
    c.gbt.n_rounds = j.value("n_rounds", c.gbt.n_rounds);
    c.gbt.early_stopping_rounds = j.value("early_stopping_rounds", c.gbt.early_stopping_rounds);
    c.gbt.max_depth = j.value("max_depth", c.gbt.max_depth);
    c.gbt.eta = j.value("eta", c.gbt.eta);
    c.gbt.gamma = j.value("gamma", c.gbt.gamma);
    c.gbt.lambda = j.value("lambda", c.gbt.lambda);
    c.gbt.min_child_hessian = j.value("min_child_hessian", c.gbt.min_child_hessian);
    c.svm.c = j.value("C", c.svm.c);
    if (j.contains("gamma_rbf") && j["gamma_rbf"].is_number()) c.svm.gamma_rbf = j["gamma_rbf"].get<double>();
    c.svm.tolerance = j.value("tolerance", c.svm.tolerance);
    c.knn.k = j.value("k", c.knn.k);
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model config: ") + e.what());
  }
}

std::vector<ModelConfig> default_grid(ClassifierKind kind) {
  std::vector<ModelConfig> g;
  ModelConfig base;
  base.kind = kind;
  switch (kind) {
    case ClassifierKind::GBT:
      for (int d : {2, 3, 6, 12})
        for (double eta : {0.1, 0.3})
          for (double gamma : {0.0, 1.0}) {
            auto c = base;
            c.gbt.max_depth = d;
            c.gbt.eta = eta;
            c.gbt.gamma = gamma;
            g.push_back(c);
          }
      break;
    case ClassifierKind::SVM:
      for (double cc : {0.1, 1.0, 10.0})
        for (double gr : {0.0, 0.1, 1.0}) {
          auto c = base;
          c.svm.c = cc;
          c.svm.gamma_rbf = gr;
          g.push_back(c);
        }
      break;
    case ClassifierKind::KNN:
      for (int k : {3, 5, 7, 9}) {
        auto c = base;
        c.knn.k = k;
        g.push_back(c);
      }
      break;
  }
  return g;
}

std::vector<int> predict(const TrainedModel& m, const Eigen::MatrixXd& x) {
  return std::visit([&](const auto& model) { return model.predict(x); }, m);
}

TrainedModel fit_model(const ModelConfig& cfg, const Eigen::MatrixXd& x, const std::vector<int>& y,
                       std::optional<EvalSet> eval) {
  validate(cfg);
  switch (cfg.kind) {
    case ClassifierKind::GBT: return gbt_train(x, y, cfg.gbt, eval);
    case ClassifierKind::SVM: return svm_train(x, y, cfg.svm);
    case ClassifierKind::KNN: return knn_fit(x, y, cfg.knn);
  }
  throw ConfigError("unknown classifier");
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  if (truth.size() != pred.size() || truth.empty()) throw DataError("accuracy needs equal, non-empty label vectors");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) ok += truth[i] == pred[i];
  return static_cast<double>(ok) / static_cast<double>(truth.size());
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json row_json(const Eigen::RowVectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json scaler_json(const Standardizer& s) { return {{"mean", row_json(s.mean)}, {"scale", row_json(s.scale)}}; }

}  // namespace

json to_json(const TrainedModel& model, const std::vector<std::string>& names) {
  struct Visitor {
    const std::vector<std::string>& names;
    json operator()(const GbtModel& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) {
          if (n.feature < 0) {
            nodes.push_back({{"leaf", n.weight}, {"cover", n.cover}});
          } else {
            json node{{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                      {"right", n.right},     {"gain", n.gain},           {"cover", n.cover}};
            if (static_cast<std::size_t>(n.feature) < names.size())
              node["feature_name"] = names[static_cast<std::size_t>(n.feature)];
            nodes.push_back(node);
          }
        }
        trees.push_back({{"nodes", nodes}});
      }
      return {{"type", "gbt"},
              {"objective", "binary:logistic"},
              {"n_features", m.n_features},
              {"base_margin", m.base_margin},
              {"best_iteration", m.best_iteration},
              {"params", to_json(ModelConfig{ClassifierKind::GBT, m.params, {}, {}})},
              {"trees", trees}};
    }
    json operator()(const SvmModel& m) const {
      return {{"type", "svm"},
              {"kernel", "rbf"},
              {"gamma_rbf", m.gamma_used},
              {"C", m.params.c},
              {"rho", m.rho},
              {"converged", m.converged},
              {"scaler", scaler_json(m.scaler)},
              {"support_vectors", matrix_json(m.support_vectors)},
              {"dual_coef", vector_json(m.coef)}};
    }
    json operator()(const KnnModel& m) const {
      return {{"type", "knn"},
              {"k", m.params.k},
              {"metric", "euclidean (standardized)"},
              {"scaler", scaler_json(m.scaler)},
              {"train", matrix_json(m.train)},
              {"labels", m.labels}};
    }
  };
  json j = std::visit(Visitor{names}, model);
  if (!names.empty()) j["feature_names"] = names;
  return j;
}

}  // namespace eegsweep
