// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Experiment-space enumeration and execution: every (cleaning, chunk, channel
// subset, classifier, selection) combination is cross-validated on one cohort.
// Cleaned recordings and per-(subject, cleaning, chunk, channel) feature vectors
// are computed once and shared; a checkpoint directory makes runs resumable.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegsweep/classify.hpp"
#include "eegsweep/cleaning.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/segmentation.hpp"
#include "eegsweep/selection.hpp"

namespace eegsweep {

/// Axes of the experiment space. Every axis can be restricted.
struct SweepSpace {
  std::vector<CleaningKind> cleanings{CleaningKind::Raw, CleaningKind::Filtered, CleaningKind::ASR,
                                      CleaningKind::ICA};
  std::vector<SegmentSpec> chunks = all_segment_specs();
  std::vector<int> subset_sizes{1};     // channels per subset, each in {1, 2, 3}
  std::vector<std::string> channels;    // pool for subsets; empty = full montage
  std::vector<ClassifierKind> classifiers{ClassifierKind::GBT, ClassifierKind::SVM, ClassifierKind::KNN};
  std::vector<bool> feature_selection{true, false};
  /// Trios run only with the boosted-tree classifier and feature selection.
  bool paper_faithful_trios = true;
};

void validate(const SweepSpace& s);

struct ExperimentSpec {
  CleaningKind cleaning = CleaningKind::Raw;
  SegmentSpec chunk;
  std::vector<std::string> channels;  // montage order
  ClassifierKind classifier = ClassifierKind::GBT;
  bool feature_selection = true;

  /// "ASR|1/1|P3-P4|XGB|Yes": unique within a sweep.
  std::string key() const;
  std::string channels_label() const;  // "P3-P4"
};

/// Specs in axis order: cleaning, chunk, subset (size, then montage order),
/// classifier, selection flag.
std::vector<ExperimentSpec> enumerate(const SweepSpace& s);

/// Number of specs enumerate() would produce, without materializing them.
std::size_t count_specs(const SweepSpace& s);

/// What the "Standard error" column reports.
enum class SpreadKind { SampleStd, StandardError };
std::string to_string(SpreadKind k);
SpreadKind spread_kind_from_string(std::string_view s);

struct SweepOptions {
  CleaningPipeline cleaning;  // parameter blocks; `kind` is overridden per spec
  FeatureParams features;
  SelectionConfig selection;
  bool selection_in_fold = false;
  /// Search grid per classifier; missing kinds use default_grid().
  std::map<ClassifierKind, std::vector<ModelConfig>> grids;
  int n_folds = 5;
  std::uint64_t seed = 0;
  bool paper_faithful_early_stop = false;
  SpreadKind spread = SpreadKind::SampleStd;
  /// One row per (spec, grid point) instead of one best-config row per spec.
  bool expand_grid = false;
  /// Share cleaned recordings and feature vectors across specs.
  bool use_cache = true;
  /// Checkpoint directory (feature cache + completed records); none = in-memory only.
  std::optional<std::filesystem::path> checkpoint_dir;
  /// Reuse completed records from the checkpoint instead of starting afresh.
  bool resume = false;
  /// Specs evaluated between checkpoint flushes.
  std::size_t batch_size = 32;
  Exec exec = Exec::Parallel;
  std::function<void(std::size_t done, std::size_t total)> progress;
  /// Testing aid: stop with SweepInterrupted after this many newly evaluated specs.
  std::optional<std::size_t> stop_after;
};

const std::vector<ModelConfig>& grid_for(const SweepOptions& o, ClassifierKind k);

struct ExperimentRecord {
  ExperimentSpec spec;
  std::optional<double> accuracy;  // empty for failed rows
  std::optional<double> spread;
  std::string hyperparameters;
  std::size_t n_features = 0;
  std::string status = "ok";  // "ok" or "failed: <reason>"

  bool ok() const { return status == "ok"; }
};

class SweepInterrupted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepStats {
  std::size_t specs = 0;
  std::size_t resumed = 0;           // specs taken from the checkpoint
  std::size_t cleanings_run = 0;     // run_pipeline calls
  std::size_t features_computed = 0; // channel feature vectors extracted
  std::size_t features_reused = 0;   // taken from the cache
};

/// Evaluates `specs` on `cohort`. Records follow spec order; a failing spec
/// yields a failed row rather than aborting.
std::vector<ExperimentRecord> run_sweep(const std::vector<Recording>& cohort,
                                        const std::vector<ExperimentSpec>& specs,
                                        const SweepOptions& opt, SweepStats* stats = nullptr);

/// Header: Accuracy, Standard error, Cleaning technique, Chunk, Channels,
/// Classifier, Feature Selection?, Hyperparameters, Features, Status.
const std::vector<std::string>& results_header();
std::string format_results_csv(const std::vector<ExperimentRecord>& records);
void write_results_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_results_csv(std::string_view text);
std::vector<ExperimentRecord> read_results_csv(const std::filesystem::path& path);

nlohmann::json to_json(const SweepSpace& s);
SweepSpace sweep_space_from_json(const nlohmann::json& j);

}  // namespace eegsweep
