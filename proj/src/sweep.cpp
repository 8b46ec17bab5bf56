// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "eegsweep/config.hpp"
#include "eegsweep/hash.hpp"
#include "eegsweep/io.hpp"

namespace eegsweep {

namespace fs = std::filesystem;
using nlohmann::json;

// --------------------------------------------------------------- enumeration

namespace {

std::vector<std::size_t> channel_pool(const SweepSpace& s) {
  const Montage& montage = Montage::standard_1020();
  std::vector<std::size_t> pool;
  if (s.channels.empty()) {
    for (std::size_t i = 0; i < montage.size(); ++i) pool.push_back(i);
  } else {
    for (const auto& c : s.channels) pool.push_back(montage.require_index(c));
    std::sort(pool.begin(), pool.end());
    if (std::adjacent_find(pool.begin(), pool.end()) != pool.end())
      throw ConfigError("sweep channel pool lists a channel twice");
  }
  return pool;
}

std::vector<std::vector<std::size_t>> combinations(const std::vector<std::size_t>& pool, int k) {
  std::vector<std::vector<std::size_t>> out;
  const auto n = pool.size();
  if (static_cast<std::size_t>(k) > n) return out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  while (true) {
    std::vector<std::size_t> combo;
    for (auto i : idx) combo.push_back(pool[i]);
    out.push_back(std::move(combo));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(k - i)) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (auto j = static_cast<std::size_t>(i) + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::size_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<int> sorted_sizes(const SweepSpace& s) {
  std::vector<int> sizes = s.subset_sizes;
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

/// Classifier/selection pairs admitted for a subset size.
std::vector<std::pair<ClassifierKind, bool>> model_axes(const SweepSpace& s, int size) {
  std::vector<std::pair<ClassifierKind, bool>> out;
  for (auto c : s.classifiers)
    for (bool sel : s.feature_selection) {
      if (size == 3 && s.paper_faithful_trios && !(c == ClassifierKind::GBT && sel)) continue;
      out.emplace_back(c, sel);
    }
  return out;
}

}  // namespace

void validate(const SweepSpace& s) {
  if (s.cleanings.empty() || s.chunks.empty() || s.subset_sizes.empty() || s.classifiers.empty() ||
      s.feature_selection.empty())
    throw ConfigError("every sweep axis needs at least one value");
  for (const auto& c : s.chunks) validate(c);
  for (int k : s.subset_sizes)
    if (k < 1 || k > 3) throw ConfigError("channel subset sizes must be 1, 2 or 3");
  auto unique = [](auto v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!unique(s.cleanings) || !unique(s.chunks) || !unique(s.subset_sizes) || !unique(s.classifiers) ||
      !unique(s.feature_selection))
    throw ConfigError("sweep axes must not repeat values");
  channel_pool(s);
}

std::string ExperimentSpec::channels_label() const {
  std::string out;
  for (const auto& c : channels) out += (out.empty() ? "" : "-") + c;
  return out;
}

std::string ExperimentSpec::key() const {
  return to_string(cleaning) + "|" + to_string(chunk) + "|" + channels_label() + "|" + to_string(classifier) + "|" +
         (feature_selection ? "Yes" : "No");
}

std::vector<ExperimentSpec> enumerate(const SweepSpace& s) {
  validate(s);
  const Montage& montage = Montage::standard_1020();
  const auto pool = channel_pool(s);
  std::vector<ExperimentSpec> out;
  out.reserve(count_specs(s));
  for (auto cleaning : s.cleanings)
    for (const auto& chunk : s.chunks)
      for (int size : sorted_sizes(s)) {
        const auto axes = model_axes(s, size);
        for (const auto& combo : combinations(pool, size)) {
          std::vector<std::string> names;
          for (auto i : combo) names.push_back(montage.names()[i]);
          for (const auto& [clf, sel] : axes) out.push_back(ExperimentSpec{cleaning, chunk, names, clf, sel});
        }
      }
  return out;
}

std::size_t count_specs(const SweepSpace& s) {
  validate(s);
  const auto pool = channel_pool(s).size();
  std::size_t per_chunk = 0;
  for (int size : s.subset_sizes) per_chunk += choose(pool, static_cast<std::size_t>(size)) * model_axes(s, size).size();
  return s.cleanings.size() * s.chunks.size() * per_chunk;
}

std::string to_string(SpreadKind k) { return k == SpreadKind::SampleStd ? "sample_std" : "standard_error"; }

SpreadKind spread_kind_from_string(std::string_view s) {
  if (s == "sample_std" || s == "std") return SpreadKind::SampleStd;
  if (s == "standard_error" || s == "sem") return SpreadKind::StandardError;
  throw ConfigError("unknown spread definition '" + std::string(s) + "' (expected sample_std or standard_error)");
}

const std::vector<ModelConfig>& grid_for(const SweepOptions& o, ClassifierKind k) {
  if (const auto it = o.grids.find(k); it != o.grids.end() && !it->second.empty()) return it->second;
  static const std::map<ClassifierKind, std::vector<ModelConfig>> defaults{
      {ClassifierKind::GBT, default_grid(ClassifierKind::GBT)},
      {ClassifierKind::SVM, default_grid(ClassifierKind::SVM)},
      {ClassifierKind::KNN, default_grid(ClassifierKind::KNN)}};
  return defaults.at(k);
}

// ------------------------------------------------------------- feature cache

namespace {

constexpr char kCacheMagic[8] = {'E', 'S', 'F', 'C', 'A', 'C', 'H', '1'};
constexpr std::size_t kKeyLength = 64;  // hex SHA-256

struct FeatureCache {
  std::unordered_map<std::string, FeatureVector> values;
  std::unordered_map<std::string, std::string> errors;  // keyed like values; never persisted
};

std::string feature_key(const std::string& subject_hash, const std::string& stage_hash, const SegmentSpec& chunk,
                        std::size_t channel) {
  Hasher h;
  h.text(subject_hash).text(stage_hash).text(to_string(chunk)).number(static_cast<std::uint64_t>(channel));
  return h.hex();
}

/// Digest of everything before feature evaluation besides the subject: cleaning + feature parameters.
std::string stage_hash(const CleaningPipeline& p, const FeatureParams& f) {
  return sha256_hex(to_json(p).dump() + "\n" + to_json(f).dump());
}

void load_cache_file(const fs::path& path, FeatureCache& cache) {
  std::ifstream in(path, std::ios::binary);
  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kCacheMagic)) {
    warn("ignoring unreadable feature cache " + path.string());
    return;
  }
  std::string key(kKeyLength, '\0');
  FeatureVector v;
  while (in.read(key.data(), static_cast<std::streamsize>(kKeyLength)) &&
         in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size())))
    cache.values.emplace(key, v);
}

void write_cache_file(const fs::path& path, const std::vector<std::pair<std::string, FeatureVector>>& entries) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(kCacheMagic, 8);
    for (const auto& [k, v] : entries) {
      out.write(k.data(), static_cast<std::streamsize>(k.size()));
      out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()));
    }
    if (!out) throw DataError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ------------------------------------------------------------ checkpointing

json record_row_json(const ExperimentRecord& r) {
  return {{"accuracy", r.accuracy ? json(*r.accuracy) : json(nullptr)},
          {"spread", r.spread ? json(*r.spread) : json(nullptr)},
          {"hyperparameters", r.hyperparameters},
          {"n_features", r.n_features},
          {"status", r.status}};
}

ExperimentRecord record_row_from_json(const ExperimentSpec& spec, const json& j) {
  ExperimentRecord r;
  r.spec = spec;
  if (!j.at("accuracy").is_null()) r.accuracy = j.at("accuracy").get<double>();
  if (!j.at("spread").is_null()) r.spread = j.at("spread").get<double>();
  r.hyperparameters = j.at("hyperparameters").get<std::string>();
  r.n_features = j.at("n_features").get<std::size_t>();
  r.status = j.at("status").get<std::string>();
  return r;
}

std::string sweep_fingerprint(const std::vector<Recording>& cohort, const SweepOptions& o) {
  json grids = json::object();
  for (auto k : {ClassifierKind::GBT, ClassifierKind::SVM, ClassifierKind::KNN}) {
    json a = json::array();
    for (const auto& c : grid_for(o, k)) a.push_back(to_json(c));
    grids[to_string(k)] = a;
  }
  json j{{"version", std::string(kVersion)},
         {"cleaning", to_json(o.cleaning)},
         {"features", to_json(o.features)},
         {"selection", to_json(o.selection)},
         {"selection_in_fold", o.selection_in_fold},
         {"grids", grids},
         {"n_folds", o.n_folds},
         {"seed", o.seed},
         {"paper_faithful_early_stop", o.paper_faithful_early_stop},
         {"spread", to_string(o.spread)},
         {"expand_grid", o.expand_grid}};
  json subjects = json::array();
  for (const auto& r : cohort) subjects.push_back(content_hash(r));
  j["cohort"] = subjects;
  return sha256_hex(j.dump());
}

class Checkpoint {
 public:
  Checkpoint(const fs::path& dir, const std::string& fingerprint, bool resume) : dir_(dir) {
    fs::create_directories(dir_ / "features");
    const fs::path header = dir_ / "sweep.json";
    const fs::path records = dir_ / "records.jsonl";
    if (resume && fs::exists(header)) {
      const json h = json::parse(read_text_file(header));
      if (h.value("fingerprint", "") != fingerprint)
        throw ConfigError("checkpoint in " + dir_.string() +
                          " was written for a different cohort or configuration; rerun without --resume");
      if (fs::exists(records)) load(records);
    } else {
      write_text_file(header, json{{"fingerprint", fingerprint}, {"version", std::string(kVersion)}}.dump(2) + "\n");
      std::ofstream(records, std::ios::trunc);
    }
    out_.open(records, std::ios::app);
    if (!out_) throw DataError("cannot append to " + records.string());
  }

  const json* find(const std::string& key) const {
    const auto it = done_.find(key);
    return it == done_.end() ? nullptr : &it->second;
  }

  void append(const ExperimentSpec& spec, const std::vector<ExperimentRecord>& rows) {
    json a = json::array();
    for (const auto& r : rows) a.push_back(record_row_json(r));
    out_ << json{{"key", spec.key()}, {"rows", a}}.dump() << '\n';
  }
  void flush() { out_.flush(); }

  fs::path cache_path(const std::string& stage) const { return dir_ / "features" / (stage.substr(0, 16) + ".bin"); }
  fs::path dir() const { return dir_; }

 private:
  void load(const fs::path& records) {
    std::ifstream in(records);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        json j = json::parse(line);
        done_[j.at("key").get<std::string>()] = std::move(j.at("rows"));
      } catch (const json::exception&) {
        break;  // a torn final line from an interrupted run
      }
    }
  }

  fs::path dir_;
  std::map<std::string, json> done_;
  std::ofstream out_;
};

// ---------------------------------------------------------------- evaluation

std::vector<ExperimentRecord> failed(const ExperimentSpec& spec, const std::string& why) {
  ExperimentRecord r;
  r.spec = spec;
  r.status = "failed: " + why;
  return {r};
}

std::vector<ExperimentRecord> evaluate(const ExperimentSpec& spec, FeatureMatrix m, const SweepOptions& o) {
  if (spec.feature_selection && !o.selection_in_fold) {
    auto sel = select_features(m, o.selection, Exec::Serial);
    if (sel.matrix.n_cols() == 0) return failed(spec, "no feature passed selection");
    m = std::move(sel.matrix);
  }
  CvOptions cv;
  cv.n_folds = o.n_folds;
  cv.seed = o.seed;
  cv.paper_faithful_early_stop = o.paper_faithful_early_stop;
  if (spec.feature_selection && o.selection_in_fold) cv.in_fold_selection = o.selection;
  cv.exec = Exec::Serial;
  const auto res = cross_validate(m, grid_for(o, spec.classifier), cv);
  const double scale = o.spread == SpreadKind::StandardError ? 1.0 / std::sqrt(static_cast<double>(o.n_folds)) : 1.0;
  auto row = [&](const ModelConfig& c, double acc, double spread) {
    ExperimentRecord r;
    r.spec = spec;
    r.accuracy = acc;
    r.spread = spread * scale;
    r.hyperparameters = c.describe();
    r.n_features = static_cast<std::size_t>(m.n_cols());
    return r;
  };
  std::vector<ExperimentRecord> out;
  if (o.expand_grid)
    for (const auto& g : res.grid) out.push_back(row(g.config, g.mean_accuracy, g.spread));
  else
    out.push_back(row(res.best_config, res.mean_accuracy, res.spread));
  return out;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const std::vector<Recording>& cohort, const std::vector<ExperimentSpec>& specs,
                                        const SweepOptions& opt, SweepStats* stats) {
  validate(opt.selection);
  if (opt.n_folds < 2) throw ConfigError("need at least 2 folds");
  if (opt.batch_size == 0) throw ConfigError("batch size must be positive");
  for (const auto& [k, g] : opt.grids)
    for (const auto& c : g) validate(c);
  {
    std::set<std::string> keys;
    for (const auto& s : specs)
      if (!keys.insert(s.key()).second) throw ConfigError("duplicate experiment " + s.key());
  }
  SweepStats st;
  st.specs = specs.size();
  if (!specs.empty() && cohort.empty()) throw DataError("cohort is empty");

  std::optional<Checkpoint> ckpt;
  if (opt.checkpoint_dir) ckpt.emplace(*opt.checkpoint_dir, sweep_fingerprint(cohort, opt), opt.resume);

  std::vector<std::vector<ExperimentRecord>> rows(specs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (ckpt)
      if (const json* done = ckpt->find(specs[i].key())) {
        for (const auto& r : *done) rows[i].push_back(record_row_from_json(specs[i], r));
        ++st.resumed;
        continue;
      }
    pending.push_back(i);
  }

  const Montage& montage = Montage::standard_1020();
  std::vector<std::string> subject_hash;
  for (const auto& r : cohort) subject_hash.push_back(content_hash(r));
  FeatureCache cache;
  std::map<CleaningKind, std::string> stage;
  for (auto k : {CleaningKind::Raw, CleaningKind::Filtered, CleaningKind::ASR, CleaningKind::ICA}) {
    CleaningPipeline p = opt.cleaning;
    p.kind = k;
    stage[k] = stage_hash(p, opt.features);
  }

  // Stage 1: every missing (subject, cleaning, chunk, channel) feature vector,
  // cleaning each subject at most once per cleaning kind.
  if (opt.use_cache) {
    std::map<CleaningKind, std::map<SegmentSpec, std::set<std::size_t>>> need;
    for (auto i : pending)
      for (const auto& ch : specs[i].channels)
        need[specs[i].cleaning][specs[i].chunk].insert(montage.require_index(ch));
    for (const auto& [kind, chunks] : need) {
      if (ckpt && fs::exists(ckpt->cache_path(stage[kind]))) load_cache_file(ckpt->cache_path(stage[kind]), cache);
      CleaningPipeline pipeline = opt.cleaning;
      pipeline.kind = kind;
      using Entry = std::pair<std::string, FeatureVector>;
      std::vector<std::vector<Entry>> fresh(cohort.size());
      std::vector<std::vector<std::pair<std::string, std::string>>> errs(cohort.size());
      std::vector<std::size_t> reused(cohort.size(), 0), cleaned(cohort.size(), 0);
      const std::string& sh = stage[kind];
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
      for (std::int64_t si = 0; si < static_cast<std::int64_t>(cohort.size()); ++si) {
        const auto s = static_cast<std::size_t>(si);
        std::vector<std::pair<SegmentSpec, std::vector<std::pair<std::size_t, std::string>>>> todo;
        for (const auto& [chunk, channels] : chunks) {
          std::vector<std::pair<std::size_t, std::string>> missing;
          for (auto c : channels) {
            auto key = feature_key(subject_hash[s], sh, chunk, c);
            if (cache.values.count(key)) ++reused[s];
            else missing.emplace_back(c, std::move(key));
          }
          if (!missing.empty()) todo.emplace_back(chunk, std::move(missing));
        }
        if (todo.empty()) continue;
        std::optional<Recording> clean;
        std::string clean_error;
        try {
          clean = run_pipeline(cohort[s], pipeline);
          cleaned[s] = 1;
        } catch (const std::exception& e) {
          clean_error = cohort[s].subject_id + ": " + e.what();
        }
        for (const auto& [chunk, missing] : todo) {
          std::optional<Recording> seg;
          std::string error = clean_error;
          if (clean) try {
              seg = segment(*clean, chunk);
            } catch (const std::exception& e) {
              error = cohort[s].subject_id + ": " + e.what();
            }
          for (const auto& [c, key] : missing) {
            if (!seg) {
              errs[s].emplace_back(key, error);
              continue;
            }
            try {
              fresh[s].emplace_back(key, extract_channel(seg->channel(static_cast<Eigen::Index>(c)),
                                                          seg->sample_rate_hz, opt.features));
            } catch (const std::exception& e) {
              errs[s].emplace_back(key, cohort[s].subject_id + ": " + e.what());
            }
          }
        }
      }
      bool grew = false;
      for (std::size_t s = 0; s < cohort.size(); ++s) {
        st.features_reused += reused[s];
        st.cleanings_run += cleaned[s];
        st.features_computed += fresh[s].size();
        grew = grew || !fresh[s].empty();
        for (auto& [k, v] : fresh[s]) cache.values.emplace(std::move(k), v);
        for (auto& [k, e] : errs[s]) cache.errors.emplace(std::move(k), std::move(e));
      }
      if (ckpt && grew) {
        // Persist this stage's entries; sorted so the file is reproducible.
        std::vector<Entry> entries;
        for (std::size_t s = 0; s < cohort.size(); ++s)
          for (const auto& [chunk, channels] : chunks)
            for (auto c : channels) {
              const auto key = feature_key(subject_hash[s], sh, chunk, c);
              if (const auto it = cache.values.find(key); it != cache.values.end()) entries.emplace_back(key, it->second);
            }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        write_cache_file(ckpt->cache_path(sh), entries);
      }
    }
  }

  auto matrix_for = [&](const ExperimentSpec& spec) -> FeatureMatrix {
    if (!opt.use_cache) {
      CleaningPipeline p = opt.cleaning;
      p.kind = spec.cleaning;
      return build_feature_matrix(cohort, p, spec.chunk, spec.channels, opt.features, Exec::Serial);
    }
    std::vector<Eigen::MatrixXd> blocks(cohort.size());
    for (std::size_t s = 0; s < cohort.size(); ++s) {
      blocks[s] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(montage.size()), static_cast<Eigen::Index>(kFeatureCount));
      for (const auto& ch : spec.channels) {
        const auto c = montage.require_index(ch);
        const auto key = feature_key(subject_hash[s], stage[spec.cleaning], spec.chunk, c);
        const auto it = cache.values.find(key);
        if (it == cache.values.end()) {
          const auto e = cache.errors.find(key);
          throw DataError(e != cache.errors.end() ? e->second : "feature vector missing from cache");
        }
        for (std::size_t k = 0; k < kFeatureCount; ++k)
          blocks[s](static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = it->second[k];
      }
    }
    return assemble_feature_matrix(cohort, blocks, spec.channels);
  };

  // Stage 2: specs in batches; each batch is checkpointed in spec order.
  std::size_t evaluated = 0;
  for (std::size_t b = 0; b < pending.size(); b += opt.batch_size) {
    const std::size_t e = std::min(pending.size(), b + opt.batch_size);
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
    for (std::int64_t ii = static_cast<std::int64_t>(b); ii < static_cast<std::int64_t>(e); ++ii) {
      const auto i = pending[static_cast<std::size_t>(ii)];
      try {
        rows[i] = evaluate(specs[i], matrix_for(specs[i]), opt);
      } catch (const std::exception& ex) {
        rows[i] = failed(specs[i], ex.what());
      }
    }
    if (!opt.use_cache) st.cleanings_run += (e - b) * cohort.size();
    if (ckpt) {
      for (std::size_t k = b; k < e; ++k) ckpt->append(specs[pending[k]], rows[pending[k]]);
      ckpt->flush();
    }
    evaluated += e - b;
    if (opt.progress) opt.progress(st.resumed + evaluated, specs.size());
    if (opt.stop_after && evaluated >= *opt.stop_after && e < pending.size()) {
      if (stats) *stats = st;
      throw SweepInterrupted("sweep stopped after " + std::to_string(evaluated) + " specs");
    }
  }

  std::vector<ExperimentRecord> out;
  for (auto& r : rows)
    for (auto& x : r) out.push_back(std::move(x));
  if (stats) *stats = st;
  return out;
}

// --------------------------------------------------------------- results CSV

const std::vector<std::string>& results_header() {
  static const std::vector<std::string> h{"Accuracy", "Standard error",      "Cleaning technique", "Chunk",
                                          "Channels", "Classifier",          "Feature Selection?", "Hyperparameters",
                                          "Features", "Status"};
  return h;
}

std::string format_results_csv(const std::vector<ExperimentRecord>& records) {
  CsvTable t;
  t.header = results_header();
  for (const auto& r : records)
    t.rows.push_back({r.accuracy ? format_double(*r.accuracy) : "", r.spread ? format_double(*r.spread) : "",
                      to_string(r.spec.cleaning), to_string(r.spec.chunk), r.spec.channels_label(),
                      to_string(r.spec.classifier), r.spec.feature_selection ? "Yes" : "No", r.hyperparameters,
                      std::to_string(r.n_features), r.status});
  return format_csv_table(t);
}

void write_results_csv(const fs::path& path, const std::vector<ExperimentRecord>& records) {
  write_text_file(path, format_results_csv(records));
}

std::vector<ExperimentRecord> parse_results_csv(std::string_view text) {
  const CsvTable t = parse_csv_table(text);
  std::vector<std::size_t> col;
  for (const auto& h : results_header()) col.push_back(t.column(h));
  auto number = [](const std::string& cell, std::size_t line) -> std::optional<double> {
    if (cell.empty()) return std::nullopt;
    bool ok = false;
    const double v = detail::parse_double(cell, ok);
    if (!ok) throw DataError("results row " + std::to_string(line) + ": bad number '" + cell + "'");
    return v;
  };
  std::vector<ExperimentRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    try {
      ExperimentRecord r;
      r.accuracy = number(row[col[0]], i + 2);
      r.spread = number(row[col[1]], i + 2);
      r.spec.cleaning = cleaning_from_string(row[col[2]]);
      r.spec.chunk = segment_spec_from_string(row[col[3]]);
      std::stringstream ss(row[col[4]]);
      for (std::string ch; std::getline(ss, ch, '-');) r.spec.channels.push_back(ch);
      r.spec.classifier = classifier_from_string(row[col[5]]);
      if (row[col[6]] != "Yes" && row[col[6]] != "No")
        throw DataError("Feature Selection? must be Yes or No");
      r.spec.feature_selection = row[col[6]] == "Yes";
      r.hyperparameters = row[col[7]];
      r.n_features = static_cast<std::size_t>(std::stoull(row[col[8]]));
      r.status = row[col[9]];
      out.push_back(std::move(r));
    } catch (const ConfigError& e) {
      throw DataError("results row " + std::to_string(i + 2) + ": " + e.what());
    } catch (const std::logic_error& e) {
      throw DataError("results row " + std::to_string(i + 2) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ExperimentRecord> read_results_csv(const fs::path& path) {
  try {
    return parse_results_csv(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------- JSON

json to_json(const SweepSpace& s) {
  json cl = json::array(), ch = json::array(), cf = json::array();
  for (auto c : s.cleanings) cl.push_back(to_string(c));
  for (const auto& c : s.chunks) ch.push_back(to_string(c));
  for (auto c : s.classifiers) cf.push_back(to_string(c));
  json sel = json::array();
  for (bool b : s.feature_selection) sel.push_back(b);
  return {{"cleanings", cl},       {"chunks", ch},       {"subset_sizes", s.subset_sizes},
          {"channels", s.channels}, {"classifiers", cf}, {"feature_selection", sel},
          {"paper_faithful_trios", s.paper_faithful_trios}};
}

SweepSpace sweep_space_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("space: expected a JSON object");
  static const std::set<std::string> known{"cleanings",   "chunks",           "subset_sizes",        "channels",
                                           "classifiers", "feature_selection", "paper_faithful_trios"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown configuration key 'space." + k + "'");
  SweepSpace s;
  try {
    if (j.contains("cleanings")) {
      s.cleanings.clear();
      for (const auto& v : j["cleanings"]) s.cleanings.push_back(cleaning_from_string(v.get<std::string>()));
    }
    if (j.contains("chunks")) {
      const auto& c = j["chunks"];
      if (c.is_string() && c.get<std::string>() == "all") {
        s.chunks = all_segment_specs();
      } else {
        s.chunks.clear();
        for (const auto& v : c) s.chunks.push_back(segment_spec_from_string(v.get<std::string>()));
      }
    }
    if (j.contains("subset_sizes")) s.subset_sizes = j["subset_sizes"].get<std::vector<int>>();
    if (j.contains("channels")) s.channels = j["channels"].get<std::vector<std::string>>();
    if (j.contains("classifiers")) {
      s.classifiers.clear();
      for (const auto& v : j["classifiers"]) s.classifiers.push_back(classifier_from_string(v.get<std::string>()));
    }
    if (j.contains("feature_selection")) s.feature_selection = j["feature_selection"].get<std::vector<bool>>();
    if (j.contains("paper_faithful_trios")) s.paper_faithful_trios = j["paper_faithful_trios"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("space: ") + e.what());
  }
  validate(s);
  return s;
}

}  // namespace eegsweep
