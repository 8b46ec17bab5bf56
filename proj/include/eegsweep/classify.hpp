// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Binary classifiers written from scratch (gradient-boosted trees, RBF
// support-vector machine, k-nearest neighbours), stratified k-fold
// cross-validation with grid search, and final train/hold-out fitting.
// Labels are 0/1 throughout.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "eegsweep/core.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/selection.hpp"

namespace eegsweep {

enum class ClassifierKind { GBT, SVM, KNN };

std::string to_string(ClassifierKind k);
ClassifierKind classifier_from_string(std::string_view s);

// ------------------------------------------------------------------ configs

struct GbtParams {
  int n_rounds = 100;
  int early_stopping_rounds = 50;
  int max_depth = 3;
  double eta = 0.3;
  double gamma = 0.0;   // minimum split gain
  double lambda = 1.0;  // L2 on leaf weights
  double min_child_hessian = 1e-3;
};

struct SvmParams {
  double c = 1.0;
  /// RBF width; <= 0 selects 1 / (d * var(X)) on the (standardized) training data.
  double gamma_rbf = 0.0;
  double tolerance = 1e-3;
  std::int64_t max_iterations = 200000;
};

struct KnnParams {
  int k = 5;
};

/// One grid point: a classifier kind with its hyperparameters.
struct ModelConfig {
  ClassifierKind kind = ClassifierKind::GBT;
  GbtParams gbt;
  SvmParams svm;
  KnnParams knn;

  /// Compact "key=value;..." rendering of the tuned hyperparameters.
  std::string describe() const;
  /// Grid-search tie-break order: lexicographic over the tuned values.
  bool operator<(const ModelConfig& o) const;
};

void validate(const ModelConfig& c);
nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Default search grids: GBT max_depth {2,3,6,12} x eta {0.1,0.3} x gamma {0,1};
/// SVM C {0.1,1,10} x gamma_rbf {scale, 0.1, 1}; KNN k {3,5,7,9}.
std::vector<ModelConfig> default_grid(ClassifierKind kind);

// ------------------------------------------------------------------- models

/// Per-column z-scoring fitted on training rows (zero spread -> unit scale).
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1, right = -1;
  double weight = 0.0;  // leaf output (already multiplied by eta)
  double gain = 0.0;    // realized split gain
  double cover = 0.0;   // hessian sum
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

struct GbtModel {
  GbtParams params;
  int n_features = 0;
  double base_margin = 0.0;
  std::vector<Tree> trees;
  int best_iteration = -1;
  std::vector<double> train_logloss;  // per round, full training set
  std::vector<double> eval_logloss;   // per round, when an eval set was given

  Eigen::VectorXd margin(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
  /// Total realized split gain per feature index.
  std::vector<double> total_gain() const;
};

struct EvalSet {
  const Eigen::MatrixXd* x = nullptr;
  const std::vector<int>* y = nullptr;
};

GbtModel gbt_train(const Eigen::MatrixXd& x, const std::vector<int>& y, const GbtParams& p,
                   std::optional<EvalSet> eval = std::nullopt);

struct SvmModel {
  SvmParams params;
  double gamma_used = 0.0;
  Standardizer scaler;
  Eigen::MatrixXd support_vectors;  // standardized
  Eigen::VectorXd coef;             // alpha_i * y_i (y in {-1, +1})
  double rho = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;

  Eigen::VectorXd decision(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

SvmModel svm_train(const Eigen::MatrixXd& x, const std::vector<int>& y, const SvmParams& p);

struct KnnModel {
  KnnParams params;
  Standardizer scaler;
  Eigen::MatrixXd train;  // standardized
  std::vector<int> labels;

  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

KnnModel knn_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, const KnnParams& p);
std::vector<int> knn_predict(const Eigen::MatrixXd& train_x, const std::vector<int>& train_y,
                             const Eigen::MatrixXd& test_x, int k);

using TrainedModel = std::variant<GbtModel, SvmModel, KnnModel>;

std::vector<int> predict(const TrainedModel& m, const Eigen::MatrixXd& x);
nlohmann::json to_json(const TrainedModel& m, const std::vector<std::string>& feature_names = {});

/// Fits `cfg` on (x, y). GBT uses `eval` for early stopping when given.
TrainedModel fit_model(const ModelConfig& cfg, const Eigen::MatrixXd& x, const std::vector<int>& y,
                       std::optional<EvalSet> eval = std::nullopt);

struct FeatureImportance {
  std::string feature;
  double gain = 0.0;
};

/// Features with non-zero total gain, descending; ties ordered by name.
std::vector<FeatureImportance> gbt_importance(const GbtModel& m, const std::vector<std::string>& names);

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred);

// ---------------------------------------------------------- cross-validation

/// Portable seeded generator utilities (identical streams on every platform).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Fold index (0..k-1) per row: classes shuffled with `seed`, then dealt round-robin.
/// DataError if a class has fewer than k members.
std::vector<int> stratified_folds(const std::vector<int>& y, int k, std::uint64_t seed);

/// Stratified split of `rows` into (keep, carve) with ceil(fraction * n) carved rows,
/// apportioned between classes by largest remainder.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<std::size_t>& rows, const std::vector<int>& y, double fraction, std::uint64_t seed);

struct Confusion {
  int tp = 0, tn = 0, fp = 0, fn = 0;
};

struct GridPointResult {
  ModelConfig config;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  double spread = 0.0;  // sample standard deviation across folds
};

struct CvResult {
  std::vector<double> fold_accuracies;  // best grid point
  double mean_accuracy = 0.0;
  double spread = 0.0;
  ModelConfig best_config;
  std::vector<Confusion> confusion;  // per fold, best grid point
  std::vector<GridPointResult> grid;  // every grid point, grid order
  std::vector<std::size_t> selected_per_fold;  // in-fold selection only: kept column count
};

/// Instrumentation: called whenever a data-fitted component sees training rows.
struct FitEvent {
  int fold = -1;               // -1 outside CV
  std::string stage;           // "selection", "model", "early_stopping"
  const std::vector<std::size_t>* rows = nullptr;
  const std::vector<std::size_t>* held_out = nullptr;  // the fold's test rows
};

struct CvOptions {
  int n_folds = 5;
  std::uint64_t seed = 0;
  double eval_fraction = 0.2;             // GBT early-stopping carve-out of each training fold
  bool paper_faithful_early_stop = false;  // use the test fold as the early-stopping set
  std::optional<SelectionConfig> in_fold_selection;  // recompute selection on training rows
  Exec exec = Exec::Parallel;
  std::function<void(const FitEvent&)> on_fit;
};

CvResult cross_validate(const FeatureMatrix& m, const std::vector<ModelConfig>& grid, const CvOptions& opt = {});

struct FinalModel {
  ModelConfig config;
  TrainedModel model;
  std::vector<std::string> feature_names;
  std::vector<std::size_t> train_rows, test_rows;
  double holdout_accuracy = 0.0;
  std::vector<FeatureImportance> importance;  // GBT only
};

/// Stratified 80/20 split, fit on the 80% (GBT early-stops on a further 20% carve-out).
FinalModel train_final(const FeatureMatrix& m, const ModelConfig& cfg, std::uint64_t split_seed,
                       double test_fraction = 0.2);

nlohmann::json to_json(const CvResult& r);

}  // namespace eegsweep
