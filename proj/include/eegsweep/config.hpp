// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// JSON run configuration shared by all CLI subcommands. Missing keys keep
// their defaults; unknown keys are rejected so typos never pass silently.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegsweep/classify.hpp"
#include "eegsweep/cleaning.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/selection.hpp"
#include "eegsweep/sweep.hpp"

namespace eegsweep {

nlohmann::json to_json(const CleaningPipeline& p);  // includes "kind"
CleaningPipeline cleaning_pipeline_from_json(const nlohmann::json& j);
FeatureParams feature_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SelectionConfig& c);
SelectionConfig selection_config_from_json(const nlohmann::json& j);

struct ClassifierBlock {
  ClassifierKind kind = ClassifierKind::GBT;
  /// Explicit grids per kind; empty = default_grid(kind).
  std::map<ClassifierKind, std::vector<ModelConfig>> grids;
  int n_folds = 5;
  bool paper_faithful_early_stop = false;
  SpreadKind spread = SpreadKind::SampleStd;
};

struct RunConfig {
  std::string manifest;  // cohort manifest path
  CleaningPipeline cleaning;
  FeatureParams features;
  SelectionConfig selection;
  bool selection_in_fold = false;
  ClassifierBlock classifier;
  SweepSpace space;
  bool expand_grid = false;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = all available cores
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig read_run_config(const std::filesystem::path& path);

/// Applies "a.b.c=value" to `j`. The value is parsed as JSON when possible
/// (numbers, booleans, arrays), otherwise taken as a string.
void apply_override(nlohmann::json& j, std::string_view assignment);

/// SHA-256 of the canonical (sorted-key) JSON rendering.
std::string config_hash(const RunConfig& c);

/// Sweep options implied by a run configuration.
SweepOptions sweep_options(const RunConfig& c);

}  // namespace eegsweep
