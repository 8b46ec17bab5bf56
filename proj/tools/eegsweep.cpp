// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Every subcommand reads the same JSON run
// configuration (--config, --set key=value) and writes a provenance record
// next to its outputs. Exit codes: 0 success, 1 usage/configuration error,
// 2 data error.

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "eegsweep/classify.hpp"
#include "eegsweep/cleaning.hpp"
#include "eegsweep/config.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/io.hpp"
#include "eegsweep/report.hpp"
#include "eegsweep/segmentation.hpp"
#include "eegsweep/selection.hpp"
#include "eegsweep/sweep.hpp"
#include "eegsweep/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eegsweep;

namespace {

constexpr const char* kGap = " [unspecified-default]";

/// Configuration keys whose defaults are toolkit choices rather than canonical values.
const std::set<std::string>& gap_keys() {
  static const std::set<std::string> k{
      "cleaning.fir.transition_low_hz", "cleaning.fir.transition_high_hz", "cleaning.asr.cutoff_k",
      "cleaning.asr.calib_window_s", "cleaning.asr.calib_bad_channel_fraction", "cleaning.asr.calib_z_low",
      "cleaning.asr.calib_z_high", "cleaning.asr.proc_window_s", "cleaning.asr.proc_overlap",
      "cleaning.asr.max_dims_fraction", "cleaning.ica.max_iter", "cleaning.ica.tol", "cleaning.ica.variance_coverage",
      "cleaning.ica.labeler", "features.quantile_q", "features.welch_nperseg", "features.welch_overlap",
      "features.band_edges_hz", "features.total_power_range_hz", "features.psd_fit_range_hz", "features.edge_fraction",
      "features.higuchi_kmax", "features.apen_m", "features.apen_r_fraction", "features.energy_transition_hz",
      "selection.levene_center", "classifier.grids", "classifier.paper_faithful_early_stop", "classifier.spread",
      "seed"};
  return k;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object() && !j.empty() && prefix != "classifier.grids" && prefix != "cleaning.ica.labeler") {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

std::string defaults_footer() {
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(to_json(RunConfig{}), "", kv);
  std::ostringstream o;
  o << "\nConfiguration keys (JSON via --config, or --set key=value) and their defaults.\n"
    << "Values marked" << kGap << " are choices made by this toolkit where no canonical value exists.\n";
  for (const auto& [k, v] : kv) {
    o << "  " << k << " = " << (v.size() > 60 ? v.substr(0, 57) + "..." : v);
    if (gap_keys().count(k)) o << kGap;
    o << '\n';
  }
  o << "  classifier.grids = {} -> built-in grids: XGB max_depth {2,3,6,12} x eta {0.1,0.3} x gamma {0,1};\n"
    << "      SVM C {0.1,1,10} x gamma_rbf {scale,0.1,1}; KNN k {3,5,7,9}" << kGap << '\n'
    << "\nExit codes: 0 success, 1 usage or configuration error, 2 data error.\n";
  return o.str();
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream o;
  o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return o.str();
}

/// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::string> overrides;  // produced by subcommand flags, applied after --set
  std::string argv;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "Override a configuration key, e.g. --set cleaning.asr.cutoff_k=15")
        ->type_name("KEY=VALUE");
  }

  void set(const std::string& key, const json& value) { overrides.push_back(key + "=" + value.dump()); }

  RunConfig resolve() const {
    json j = json::object();
    if (!config_path.empty()) {
      try {
        j = json::parse(read_text_file(config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
    }
    for (const auto& s : sets) apply_override(j, s);
    for (const auto& s : overrides) apply_override(j, s);
    RunConfig c = run_config_from_json(j);
    if (c.jobs > 0) set_max_threads(c.jobs);
    return c;
  }
};

void write_provenance(const fs::path& path, const std::string& command, const Common& common, const RunConfig& cfg,
                      const std::vector<fs::path>& outputs, json extra = json::object()) {
  json outs = json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  json j{{"tool", "eegsweep"},
         {"version", std::string(kVersion)},
         {"command", command},
         {"argv", common.argv},
         {"config_hash", config_hash(cfg)},
         {"seed", cfg.seed},
         {"config", to_json(cfg)},
         {"outputs", outs},
         {"created_utc", utc_now()}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_file(path, j.dump(2) + "\n");
}

fs::path sidecar(const fs::path& file) { return file.string() + ".provenance.json"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::string> channel_list(const std::string& s) {
  if (s.empty() || s == "all") return Montage::standard_1020().names();
  std::vector<std::string> out;
  for (auto& c : split_list(s)) out.push_back(Montage::standard_1020().names()[Montage::standard_1020().require_index(c)]);
  return out;
}

std::vector<Recording> load(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw ConfigError("no cohort manifest given (--manifest or config key 'manifest')");
  if (!fs::exists(cfg.manifest)) throw ConfigError("manifest " + cfg.manifest + " does not exist");
  return load_cohort(cfg.manifest, Exec::Parallel);
}

bool yes_no(const std::string& s) {
  if (s == "yes" || s == "Yes" || s == "true" || s == "1") return true;
  if (s == "no" || s == "No" || s == "false" || s == "0") return false;
  throw ConfigError("expected yes or no, got '" + s + "'");
}

// ------------------------------------------------------------------ commands

int cmd_synth(const Common& common, const std::string& spec_path, std::optional<std::size_t> per_class,
              std::optional<double> duration, std::optional<double> effect, std::optional<std::string> channel,
              const std::string& artifacts, const std::string& out) {
  const RunConfig cfg = common.resolve();
  SynthSpec s;
  if (!spec_path.empty()) s = synth_spec_from_json(json::parse(read_text_file(spec_path)));
  if (per_class) s.n_subjects_per_class = *per_class;
  if (duration) s.duration_s = *duration;
  if (effect) s.class_effect.effect_size = *effect;
  if (channel) s.class_effect.target_channel = *channel;
  if (cfg.seed != 0) s.rng_seed = cfg.seed;
  for (const auto& a : split_list(artifacts)) {
    ArtifactSpec art;
    art.kind = artifact_kind_from_string(a);
    if (art.kind == ArtifactKind::Line50Hz) art.amplitude = 1.0;
    s.artifacts.push_back(art);
  }
  validate(s);
  const auto cohort = generate_cohort(s, Exec::Parallel);
  const fs::path dir(out);
  const auto manifest = write_cohort(dir, cohort.recordings);
  write_text_file(dir / "synth_spec.json", to_json(s).dump(2) + "\n");
  write_text_file(dir / "ground_truth.json", ground_truth_json(s, cohort).dump(2) + "\n");
  write_provenance(dir / "provenance.json", "synth", common, cfg, {manifest, dir / "ground_truth.json"},
                   {{"synth_spec", to_json(s)}});
  std::cout << cohort.recordings.size() << " subjects written to " << manifest.string() << '\n';
  return 0;
}

int cmd_validate(const Common& common) {
  const RunConfig cfg = common.resolve();
  try {
    const auto cohort = load(cfg);
    std::size_t adhd = 0;
    for (const auto& r : cohort) adhd += r.label == Label::ADHD ? 1 : 0;
    std::cout << cohort.size() << " subjects OK (" << adhd << " ADHD, " << cohort.size() - adhd << " TD)\n";
    return 0;
  } catch (const CohortError& e) {
    for (const auto& i : e.issues()) std::cerr << "invalid: " << i << '\n';
    std::cerr << e.issues().size() << " issue(s) found\n";
    return 2;
  }
}

int cmd_clean(const Common& common, const std::string& out) {
  const RunConfig cfg = common.resolve();
  const auto cohort = load(cfg);
  std::vector<Recording> cleaned(cohort.size());
  std::vector<CleaningReport> reports(cohort.size());
  std::vector<std::string> errors(cohort.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(cohort.size()); ++i) {
    const auto s = static_cast<std::size_t>(i);
    try {
      cleaned[s] = run_pipeline(cohort[s], cfg.cleaning, &reports[s]);
    } catch (const std::exception& e) {
      errors[s] = cohort[s].subject_id + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  const fs::path dir(out);
  const auto manifest = write_cohort(dir, cleaned);
  json rep = json::array();
  for (std::size_t s = 0; s < cohort.size(); ++s) {
    json r{{"subject_id", cohort[s].subject_id}};
    const auto& c = reports[s];
    if (c.asr_calib_windows) r["asr_calib_windows"] = *c.asr_calib_windows;
    if (c.asr_calib_accepted) r["asr_calib_accepted"] = *c.asr_calib_accepted;
    if (c.asr_windows_modified) r["asr_windows_modified"] = *c.asr_windows_modified;
    if (c.ica_converged) r["ica_converged"] = *c.ica_converged;
    if (!c.ica_labels.empty()) {
      json l = json::array();
      for (auto x : c.ica_labels) l.push_back(to_string(x));
      r["ica_labels"] = l;
    }
    rep.push_back(r);
  }
  write_text_file(dir / "cleaning_report.json", rep.dump(2) + "\n");
  write_provenance(dir / "provenance.json", "clean", common, cfg, {manifest, dir / "cleaning_report.json"});
  std::cout << cleaned.size() << " recordings cleaned with " << to_string(cfg.cleaning.kind) << " -> "
            << manifest.string() << '\n';
  return 0;
}

int cmd_segment(const Common& common, const std::string& chunk, const std::string& out) {
  const RunConfig cfg = common.resolve();
  const auto spec = segment_spec_from_string(chunk);
  const auto cohort = load(cfg);
  std::vector<Recording> segs;
  for (const auto& r : cohort) segs.push_back(segment(r, spec));
  const fs::path dir(out);
  const auto manifest = write_cohort(dir, segs);
  write_provenance(dir / "provenance.json", "segment", common, cfg, {manifest}, {{"chunk", to_string(spec)}});
  std::cout << segs.size() << " segments " << to_string(spec) << " -> " << manifest.string() << '\n';
  return 0;
}

FeatureMatrix extract_matrix(const RunConfig& cfg, const std::string& chunk, const std::string& channels) {
  const auto cohort = load(cfg);
  return build_feature_matrix(cohort, cfg.cleaning, segment_spec_from_string(chunk), channel_list(channels),
                              cfg.features, Exec::Parallel);
}

int cmd_extract(const Common& common, const std::string& chunk, const std::string& channels, const std::string& out) {
  const RunConfig cfg = common.resolve();
  const auto m = extract_matrix(cfg, chunk, channels);
  write_feature_csv(out, m);
  write_provenance(sidecar(out), "extract", common, cfg, {out},
                   {{"chunk", chunk}, {"channels", channel_list(channels)}, {"subject_ids", m.subject_ids}});
  std::cout << "feature matrix " << m.n_rows() << " x " << m.n_cols() << " (+label) -> " << out << '\n';
  return 0;
}

int cmd_select(const Common& common, const std::string& in, const std::string& out, std::string report) {
  const RunConfig cfg = common.resolve();
  const auto m = read_feature_csv(in);
  const auto res = select_features(m, cfg.selection, Exec::Parallel);
  if (report.empty()) report = fs::path(out).replace_extension("").string() + "_report.csv";
  write_feature_csv(out, res.matrix);
  write_selection_csv(report, res.report);
  write_provenance(sidecar(out), "select", common, cfg, {out, report}, {{"input", in}});
  std::cout << res.matrix.n_cols() << " of " << m.n_cols() << " features kept at alpha " << cfg.selection.alpha
            << " -> " << out << '\n';
  return 0;
}

int cmd_train(const Common& common, const std::string& features, const std::string& chunk,
              const std::string& channels, const std::string& selection, const std::string& out) {
  const RunConfig cfg = common.resolve();
  FeatureMatrix m = features.empty() ? extract_matrix(cfg, chunk, channels) : read_feature_csv(features);
  const bool select = yes_no(selection);
  const auto n_all = m.n_cols();
  if (select && !cfg.selection_in_fold) {
    auto res = select_features(m, cfg.selection, Exec::Parallel);
    if (res.matrix.n_cols() == 0) throw DataError("no feature passed selection");
    m = std::move(res.matrix);
  }
  const auto opt = sweep_options(cfg);
  CvOptions cv;
  cv.n_folds = opt.n_folds;
  cv.seed = cfg.seed;
  cv.paper_faithful_early_stop = opt.paper_faithful_early_stop;
  if (select && cfg.selection_in_fold) cv.in_fold_selection = cfg.selection;
  const auto& grid = grid_for(opt, cfg.classifier.kind);
  const auto r = cross_validate(m, grid, cv);
  auto final_matrix = m;
  if (select && cfg.selection_in_fold) {
    auto res = select_features(m, cfg.selection, Exec::Parallel);
    if (res.matrix.n_cols() > 0) final_matrix = std::move(res.matrix);
  }
  const auto fin = train_final(final_matrix, r.best_config, cfg.seed);
  const double spread = opt.spread == SpreadKind::StandardError ? r.spread / std::sqrt(double(opt.n_folds)) : r.spread;

  const fs::path dir(out);
  fs::create_directories(dir);
  json cvj = to_json(r);
  cvj["features_in"] = n_all;
  cvj["features_used"] = m.n_cols();
  cvj["classifier"] = to_string(cfg.classifier.kind);
  write_text_file(dir / "cv.json", cvj.dump(2) + "\n");
  json model{{"config", to_json(fin.config)},
             {"holdout_accuracy", fin.holdout_accuracy},
             {"train_rows", fin.train_rows.size()},
             {"test_rows", fin.test_rows.size()},
             {"model", to_json(fin.model, fin.feature_names)}};
  write_text_file(dir / "model.json", model.dump(2) + "\n");
  std::vector<fs::path> outputs{dir / "cv.json", dir / "model.json"};
  if (!fin.importance.empty()) {
    write_csv_table(dir / "importance.csv", importance_table(importance_report(fin.importance, fin.importance.size())));
    outputs.push_back(dir / "importance.csv");
  }
  write_provenance(dir / "provenance.json", "train", common, cfg, outputs,
                   {{"chunk", chunk}, {"channels", features.empty() ? json(channel_list(channels)) : json(nullptr)},
                    {"features", features}, {"selection", select}});

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "classifier        " << to_string(cfg.classifier.kind) << '\n'
            << "features          " << m.n_cols() << " of " << n_all << (select ? " (selected)" : "") << '\n'
            << "mean accuracy     " << r.mean_accuracy << '\n'
            << "spread            " << spread << " (" << to_string(opt.spread) << ")\n"
            << "fold accuracies  ";
  for (double a : r.fold_accuracies) std::cout << ' ' << a;
  std::cout << "\nbest config       " << r.best_config.describe() << '\n'
            << "holdout accuracy  " << fin.holdout_accuracy << " (" << fin.train_rows.size() << " train / "
            << fin.test_rows.size() << " test)\n";
  for (std::size_t i = 0; i < fin.importance.size() && i < 3; ++i)
    std::cout << "top feature " << i + 1 << "     " << fin.importance[i].feature << '\n';
  return 0;
}

int cmd_sweep(const Common& common, const std::string& space_path, bool resume, const std::string& out, bool quiet) {
  Common c = common;
  if (!space_path.empty()) {
    json s;
    try {
      s = json::parse(read_text_file(space_path));
    } catch (const json::parse_error& e) {
      throw ConfigError(space_path + ": " + e.what());
    }
    c.overrides.insert(c.overrides.begin(), "space=" + s.dump());
  }
  const RunConfig cfg = c.resolve();
  const auto cohort = load(cfg);
  const auto specs = enumerate(cfg.space);
  const fs::path dir(out.empty() ? cfg.out_dir : out);
  fs::create_directories(dir);
  auto opt = sweep_options(cfg);
  opt.checkpoint_dir = dir / "checkpoint";
  opt.resume = resume;
  if (!quiet)
    opt.progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r" << done << "/" << total << " specs" << (done == total ? "\n" : "") << std::flush;
    };
  SweepStats st;
  const auto records = run_sweep(cohort, specs, opt, &st);
  write_results_csv(dir / "results.csv", records);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.ok() ? 0 : 1;
  write_provenance(dir / "provenance.json", "sweep", c, cfg, {dir / "results.csv", dir / "checkpoint"},
                   {{"specs", specs.size()},
                    {"rows", records.size()},
                    {"failed_rows", failed},
                    {"resumed_specs", st.resumed},
                    {"subjects", cohort.size()}});
  std::cout << specs.size() << " specs, " << records.size() << " rows (" << failed << " failed, " << st.resumed
            << " resumed) -> " << (dir / "results.csv").string() << '\n';
  return 0;
}

int cmd_report(const Common& common, const std::string& results, std::vector<std::string> group_by,
               const std::string& reduce, const std::string& pairs, const std::string& importance,
               const std::string& out) {
  const RunConfig cfg = common.resolve();
  const auto records = read_results_csv(results);
  const fs::path dir(out);
  fs::create_directories(dir);
  std::vector<fs::path> outputs;
  if (group_by.empty())
    group_by = {"Cleaning technique", "Chunk", "Divisor", "Channel count", "Classifier", "Feature Selection?"};
  for (const auto& g : group_by) {
    const auto s = summarize(records, {g});
    std::string stem = "summary_";
    for (char ch : g)
      if (std::isalnum(static_cast<unsigned char>(ch))) stem += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    write_csv_table(dir / (stem + ".csv"), summary_table(s, {g}));
    write_text_file(dir / (stem + ".svg"), box_plot_svg(s, "Accuracy by " + g));
    outputs.push_back(dir / (stem + ".csv"));
    outputs.push_back(dir / (stem + ".svg"));
  }
  std::vector<std::pair<std::string, std::string>> pl;
  if (pairs.empty()) {
    std::set<CleaningKind> present;
    for (const auto& r : records) present.insert(r.spec.cleaning);
    for (auto k : present)
      if (k != CleaningKind::Raw && present.count(CleaningKind::Raw)) pl.emplace_back("Raw", to_string(k));
  } else {
    for (const auto& p : split_list(pairs)) {
      const auto colon = p.find(':');
      if (colon == std::string::npos) throw ConfigError("pair '" + p + "' is not of the form A:B");
      pl.emplace_back(p.substr(0, colon), p.substr(colon + 1));
    }
  }
  write_csv_table(dir / "significance.csv", significance_table(mark_significance(records, "Cleaning technique", pl)));
  outputs.push_back(dir / "significance.csv");
  const auto red = reduce_from_string(reduce);
  const auto topo = topomap_data(records, red);
  write_csv_table(dir / "topomap.csv", topomap_table(topo));
  outputs.push_back(dir / "topomap.csv");
  if (!importance.empty()) {
    const auto t = read_csv_table(importance);
    std::vector<FeatureImportance> fi;
    for (const auto& row : t.rows) {
      bool ok = false;
      const double g = detail::parse_double(row[t.column("gain")], ok);
      if (!ok) throw DataError(importance + ": bad gain value");
      fi.push_back({row[t.column("feature")], g});
    }
    write_csv_table(dir / "importance_top15.csv", importance_table(importance_report(fi, 15)));
    outputs.push_back(dir / "importance_top15.csv");
  }
  write_provenance(dir / "provenance.json", "report", common, cfg, outputs,
                   {{"results", results}, {"reduce", reduce}});
  const auto arg = topomap_argmax(topo);
  std::cout << records.size() << " records summarized";
  if (arg) std::cout << "; top channel (" << reduce << ") " << *arg;
  std::cout << " -> " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eegsweep: EEG cleaning, feature extraction and classifier sweeps"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.footer(defaults_footer());

  Common common;
  for (int i = 0; i < argc; ++i) common.argv += (i ? " " : "") + std::string(argv[i]);

  std::string manifest, pipeline, chunk = "1/1", channels, out, features_in, selection = "yes", space, results,
                                   reduce = "max", pairs, importance, report_path, spec_path, artifacts, classifier;
  std::vector<std::string> group_by;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<double> alpha, duration, effect;
  std::optional<std::size_t> per_class;
  std::optional<std::string> effect_channel;
  bool resume = false, expand = false, in_fold = false, faithful = false, quiet = false;

  auto with_common = [&](CLI::App* sub) {
    common.add_to(sub);
    sub->add_option("--seed", seed, "Seed for every random choice (64-bit)")->type_name("UINT");
    sub->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    return sub;
  };
  auto with_cohort = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest, "Cohort manifest JSON");
    sub->add_option("--pipeline", pipeline, "Cleaning: raw | filtered | asr | ica (default raw)");
    return sub;
  };

  auto* synth = with_common(app.add_subcommand("synth", "Generate a synthetic cohort with known ground truth"));
  synth->add_option("--spec", spec_path, "Synthetic cohort specification JSON")->check(CLI::ExistingFile);
  synth->add_option("--per-class", per_class, "Subjects per class (default 20)");
  synth->add_option("--duration", duration, "Recording length in seconds (default 60)");
  synth->add_option("--effect-size", effect, "Class effect in background-SD units (default 1.0)");
  synth->add_option("--effect-channel", effect_channel, "Channel carrying the class effect (default P3)");
  synth->add_option("--artifacts", artifacts, "Comma list of artifacts to inject: blink, muscle, line, bad_channel");
  synth->add_option("--out", out, "Output directory")->required();

  auto* validate_cmd = with_common(app.add_subcommand("validate", "Check a cohort manifest and its recordings"));
  validate_cmd->add_option("--manifest", manifest, "Cohort manifest JSON");

  auto* clean = with_cohort(with_common(app.add_subcommand("clean", "Clean every recording of a cohort")));
  clean->add_option("--out", out, "Output directory")->required();

  auto* seg = with_common(app.add_subcommand("segment", "Cut one chunk i/j out of every recording"));
  seg->add_option("--manifest", manifest, "Cohort manifest JSON");
  seg->add_option("--chunk", chunk, "Chunk i/j with j in {1,2,3,4,5,20}")->required();
  seg->add_option("--out", out, "Output directory")->required();

  auto* extract = with_cohort(with_common(app.add_subcommand("extract", "Build a subjects x features matrix")));
  extract->add_option("--chunk", chunk, "Chunk i/j (default 1/1)");
  extract->add_option("--channels", channels, "Comma list of channels (default all 19)");
  extract->add_option("--out", out, "Feature CSV to write")->required();

  auto* select = with_common(app.add_subcommand("select", "Keep features that differ between classes"));
  select->add_option("--features", features_in, "Feature CSV")->required()->check(CLI::ExistingFile);
  select->add_option("--alpha", alpha, "Significance level (default 0.05)");
  select->add_option("--out", out, "Selected feature CSV")->required();
  select->add_option("--report", report_path, "Per-column test report CSV (default <out>_report.csv)");

  auto* train = with_cohort(with_common(app.add_subcommand("train", "Cross-validate and fit one classifier")));
  train->add_option("--features", features_in, "Feature CSV (instead of --manifest)")->check(CLI::ExistingFile);
  train->add_option("--chunk", chunk, "Chunk i/j (default 1/1)");
  train->add_option("--channels", channels, "Comma list of channels (default all 19)");
  train->add_option("--classifier", classifier, "gbt (xgb) | svm | knn (default gbt)");
  train->add_option("--selection", selection, "Statistical feature selection: yes | no (default yes)");
  train->add_option("--alpha", alpha, "Selection significance level (default 0.05)");
  train->add_flag("--selection-in-fold", in_fold, "Recompute selection inside each training fold");
  train->add_flag("--paper-faithful-early-stop", faithful,
                  "Early-stop boosting on the CV test fold instead of a training carve-out");
  train->add_option("--out", out, "Output directory")->required();

  auto* sweep = with_cohort(with_common(app.add_subcommand("sweep", "Run the experiment space")));
  sweep->add_option("--space", space, "Sweep space JSON (cleanings, chunks, subset_sizes, ...)")
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory (default config out_dir)");
  sweep->add_flag("--resume", resume, "Continue from the checkpoint in <out>/checkpoint");
  sweep->add_flag("--expand-grid", expand, "One row per (spec, grid point)");
  sweep->add_flag("--selection-in-fold", in_fold, "Recompute selection inside each training fold");
  sweep->add_flag("--paper-faithful-early-stop", faithful,
                  "Early-stop boosting on the CV test fold instead of a training carve-out");
  sweep->add_flag("--quiet", quiet, "No progress output");

  auto* report = with_common(app.add_subcommand("report", "Summaries, significance and topographic data"));
  report->add_option("--results", results, "Sweep results CSV")->required()->check(CLI::ExistingFile);
  report->add_option("--group-by", group_by, "Column(s) to group accuracies by (repeatable)");
  report->add_option("--reduce", reduce, "Topographic reducer: max | median (default max)");
  report->add_option("--pairs", pairs, "Cleaning pairs to test, e.g. Raw:ICA,Raw:ASR (default Raw vs others)");
  report->add_option("--importance", importance, "importance.csv from 'train' to list the top 15")
      ->check(CLI::ExistingFile);
  report->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!manifest.empty()) common.set("manifest", manifest);
  if (!pipeline.empty()) common.set("cleaning.kind", pipeline);
  if (seed) common.set("seed", *seed);
  if (jobs) common.set("jobs", *jobs);
  if (alpha) common.set("selection.alpha", *alpha);
  if (!classifier.empty()) common.set("classifier.kind", classifier);
  if (in_fold) common.set("selection_in_fold", true);
  if (faithful) common.set("classifier.paper_faithful_early_stop", true);
  if (expand) common.set("expand_grid", true);

  set_warning_sink([](std::string_view m) { std::cerr << "warning: " << m << '\n'; });
  try {
    if (*synth) return cmd_synth(common, spec_path, per_class, duration, effect, effect_channel, artifacts, out);
    if (*validate_cmd) return cmd_validate(common);
    if (*clean) return cmd_clean(common, out);
    if (*seg) return cmd_segment(common, chunk, out);
    if (*extract) return cmd_extract(common, chunk, channels, out);
    if (*select) return cmd_select(common, features_in, out, report_path);
    if (*train) return cmd_train(common, features_in, chunk, channels, selection, out);
    if (*sweep) return cmd_sweep(common, space, resume, out, quiet);
    if (*report) return cmd_report(common, results, group_by, reduce, pairs, importance, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
