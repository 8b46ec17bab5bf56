// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/config.hpp"

#include <set>

#include "eegsweep/hash.hpp"
#include "eegsweep/io.hpp"

namespace eegsweep {

using nlohmann::json;

namespace {

/// Strict object reader: absent keys keep defaults, unknown keys are errors.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected a JSON object");
  }

  template <class T>
  Reader& get(const char* key, T& out) {
    if (const json* v = take(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception& e) {
        throw ConfigError(path_ + "." + key + ": " + e.what());
      }
    }
    return *this;
  }

  /// Enumerations and other string-coded values.
  template <class T, class F>
  Reader& get_as(const char* key, T& out, F&& parse) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
      out = parse(v->get<std::string>());
    }
    return *this;
  }

  const json* take(const char* key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  std::string child(const char* key) const { return path_ + "." + key; }

  void done() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown configuration key '" + path_ + "." + k + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json fir_json(const FirParams& p) {
  return {{"low_hz", p.low_hz},
          {"high_hz", p.high_hz},
          {"transition_low_hz", p.transition_low_hz},
          {"transition_high_hz", p.transition_high_hz}};
}

FirParams fir_from(const json& j, const std::string& path) {
  FirParams p;
  Reader r(j, path);
  r.get("low_hz", p.low_hz).get("high_hz", p.high_hz);
  r.get("transition_low_hz", p.transition_low_hz).get("transition_high_hz", p.transition_high_hz);
  r.done();
  return p;
}

json asr_json(const AsrParams& p) {
  return {{"cutoff_k", p.cutoff_k},
          {"calib_window_s", p.calib_window_s},
          {"calib_bad_channel_fraction", p.calib_bad_channel_fraction},
          {"calib_z_low", p.calib_z_low},
          {"calib_z_high", p.calib_z_high},
          {"proc_window_s", p.proc_window_s},
          {"proc_overlap", p.proc_overlap},
          {"max_dims_fraction", p.max_dims_fraction},
          {"min_calib_windows", p.min_calib_windows}};
}

AsrParams asr_from(const json& j, const std::string& path) {
  AsrParams p;
  Reader r(j, path);
  r.get("cutoff_k", p.cutoff_k).get("calib_window_s", p.calib_window_s);
  r.get("calib_bad_channel_fraction", p.calib_bad_channel_fraction);
  r.get("calib_z_low", p.calib_z_low).get("calib_z_high", p.calib_z_high);
  r.get("proc_window_s", p.proc_window_s).get("proc_overlap", p.proc_overlap);
  r.get("max_dims_fraction", p.max_dims_fraction).get("min_calib_windows", p.min_calib_windows);
  r.done();
  return p;
}

json labeler_json(const LabelerThresholds& t) {
  return {{"ocular_low_hz", t.ocular_low_hz},
          {"ocular_low_power_fraction", t.ocular_low_power_fraction},
          {"line_hz", t.line_hz},
          {"line_peak_ratio", t.line_peak_ratio},
          {"line_neighbourhood_hz", t.line_neighbourhood_hz},
          {"muscle_low_hz", t.muscle_low_hz},
          {"muscle_high_hz", t.muscle_high_hz},
          {"muscle_power_fraction", t.muscle_power_fraction},
          {"channel_norm_fraction", t.channel_norm_fraction}};
}

LabelerThresholds labeler_from(const json& j, const std::string& path) {
  LabelerThresholds t;
  Reader r(j, path);
  r.get("ocular_low_hz", t.ocular_low_hz).get("ocular_low_power_fraction", t.ocular_low_power_fraction);
  r.get("line_hz", t.line_hz).get("line_peak_ratio", t.line_peak_ratio);
  r.get("line_neighbourhood_hz", t.line_neighbourhood_hz);
  r.get("muscle_low_hz", t.muscle_low_hz).get("muscle_high_hz", t.muscle_high_hz);
  r.get("muscle_power_fraction", t.muscle_power_fraction);
  r.get("channel_norm_fraction", t.channel_norm_fraction);
  r.done();
  return t;
}

json ica_json(const IcaParams& p) {
  return {{"max_iter", p.max_iter},
          {"tol", p.tol},
          {"seed", p.seed},
          {"variance_coverage", p.variance_coverage},
          {"min_samples", p.min_samples},
          {"labeler", labeler_json(p.labeler)}};
}

IcaParams ica_from(const json& j, const std::string& path) {
  IcaParams p;
  Reader r(j, path);
  r.get("max_iter", p.max_iter).get("tol", p.tol).get("seed", p.seed);
  r.get("variance_coverage", p.variance_coverage).get("min_samples", p.min_samples);
  if (const json* l = r.take("labeler")) p.labeler = labeler_from(*l, r.child("labeler"));
  r.done();
  return p;
}

json grids_json(const std::map<ClassifierKind, std::vector<ModelConfig>>& grids) {
  json g = json::object();
  for (const auto& [kind, list] : grids) {
    json a = json::array();
    for (const auto& c : list) a.push_back(to_json(c));
    g[to_string(kind)] = a;
  }
  return g;
}

std::map<ClassifierKind, std::vector<ModelConfig>> grids_from(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object of classifier -> grid");
  std::map<ClassifierKind, std::vector<ModelConfig>> out;
  for (const auto& [k, v] : j.items()) {
    const auto kind = classifier_from_string(k);
    if (!v.is_array()) throw ConfigError(path + "." + k + ": expected an array of grid points");
    auto& list = out[kind];
    for (const auto& point : v) {
      json p = point;
      if (!p.contains("classifier")) p["classifier"] = to_string(kind);
      auto cfg = model_config_from_json(p);
      if (cfg.kind != kind) throw ConfigError(path + "." + k + ": grid point for another classifier");
      list.push_back(cfg);
    }
    if (list.empty()) throw ConfigError(path + "." + k + ": empty grid");
  }
  return out;
}

json classifier_json(const ClassifierBlock& b) {
  return {{"kind", to_string(b.kind)},
          {"grids", grids_json(b.grids)},
          {"n_folds", b.n_folds},
          {"paper_faithful_early_stop", b.paper_faithful_early_stop},
          {"spread", to_string(b.spread)}};
}

ClassifierBlock classifier_from(const json& j, const std::string& path) {
  ClassifierBlock b;
  Reader r(j, path);
  r.get_as("kind", b.kind, classifier_from_string);
  if (const json* g = r.take("grids")) b.grids = grids_from(*g, r.child("grids"));
  r.get("n_folds", b.n_folds).get("paper_faithful_early_stop", b.paper_faithful_early_stop);
  r.get_as("spread", b.spread, spread_kind_from_string);
  r.done();
  if (b.n_folds < 2) throw ConfigError(path + ".n_folds must be at least 2");
  return b;
}

}  // namespace

json to_json(const CleaningPipeline& p) {
  return {{"kind", to_string(p.kind)}, {"fir", fir_json(p.fir)}, {"asr", asr_json(p.asr)}, {"ica", ica_json(p.ica)}};
}

CleaningPipeline cleaning_pipeline_from_json(const json& j) {
  CleaningPipeline p;
  Reader r(j, "cleaning");
  r.get_as("kind", p.kind, cleaning_from_string);
  if (const json* v = r.take("fir")) p.fir = fir_from(*v, "cleaning.fir");
  if (const json* v = r.take("asr")) p.asr = asr_from(*v, "cleaning.asr");
  if (const json* v = r.take("ica")) p.ica = ica_from(*v, "cleaning.ica");
  r.done();
  return p;
}

FeatureParams feature_params_from_json(const json& j) {
  FeatureParams p;
  const json fixed = to_json(p);
  Reader r(j, "features");
  r.get("quantile_q", p.quantile_q);
  r.get("welch_nperseg", p.welch.nperseg).get("welch_overlap", p.welch.overlap);
  r.get("band_edges_hz", p.band_edges);
  std::array<double, 2> total{p.total_low_hz, p.total_high_hz}, fit{p.psd_fit_low_hz, p.psd_fit_high_hz};
  r.get("total_power_range_hz", total).get("psd_fit_range_hz", fit);
  std::tie(p.total_low_hz, p.total_high_hz) = std::pair{total[0], total[1]};
  std::tie(p.psd_fit_low_hz, p.psd_fit_high_hz) = std::pair{fit[0], fit[1]};
  r.get("edge_fraction", p.edge_fraction).get("higuchi_kmax", p.higuchi_kmax);
  r.get("apen_m", p.apen_m).get("apen_r_fraction", p.apen_r_fraction);
  r.get("energy_transition_hz", p.energy_transition_hz);
  // Descriptive keys emitted by to_json(FeatureParams) document fixed choices.
  for (const char* key : {"welch_window", "wavelet", "degenerate_sentinel"})
    if (const json* v = r.take(key); v && *v != fixed.at(key))
      throw ConfigError(std::string("features.") + key + " is fixed at " + fixed.at(key).dump());
  r.done();
  return p;
}

json to_json(const SelectionConfig& c) {
  return {{"alpha", c.alpha}, {"levene_center", to_string(c.levene_center)}};
}

SelectionConfig selection_config_from_json(const json& j) {
  SelectionConfig c;
  Reader r(j, "selection");
  r.get("alpha", c.alpha).get_as("levene_center", c.levene_center, levene_center_from_string);
  r.done();
  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  return {{"manifest", c.manifest},
          {"cleaning", to_json(c.cleaning)},
          {"features", to_json(c.features)},
          {"selection", to_json(c.selection)},
          {"selection_in_fold", c.selection_in_fold},
          {"classifier", classifier_json(c.classifier)},
          {"space", to_json(c.space)},
          {"expand_grid", c.expand_grid},
          {"seed", c.seed},
          {"out_dir", c.out_dir},
          {"jobs", c.jobs}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  Reader r(j, "config");
  r.get("manifest", c.manifest);
  if (const json* v = r.take("cleaning")) c.cleaning = cleaning_pipeline_from_json(*v);
  if (const json* v = r.take("features")) c.features = feature_params_from_json(*v);
  if (const json* v = r.take("selection")) c.selection = selection_config_from_json(*v);
  r.get("selection_in_fold", c.selection_in_fold);
  if (const json* v = r.take("classifier")) c.classifier = classifier_from(*v, "classifier");
  if (const json* v = r.take("space")) c.space = sweep_space_from_json(*v);
  r.get("expand_grid", c.expand_grid).get("seed", c.seed).get("out_dir", c.out_dir).get("jobs", c.jobs);
  r.done();
  if (c.jobs < 0) throw ConfigError("config.jobs must be >= 0");
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override key '" + key + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::string config_hash(const RunConfig& c) { return sha256_hex(to_json(c).dump()); }

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.cleaning = c.cleaning;
  o.features = c.features;
  o.selection = c.selection;
  o.selection_in_fold = c.selection_in_fold;
  o.grids = c.classifier.grids;
  o.n_folds = c.classifier.n_folds;
  o.seed = c.seed;
  o.paper_faithful_early_stop = c.classifier.paper_faithful_early_stop;
  o.spread = c.classifier.spread;
  o.expand_grid = c.expand_grid;
  return o;
}

}  // namespace eegsweep
