// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegsweep/recording.hpp"

namespace eegsweep {

struct ManifestEntry {
  std::string subject_id;
  Label label = Label::TD;
  std::string data_path;  // relative paths resolve against the manifest's directory
};

struct CohortManifest {
  double sample_rate_hz = 128.0;
  std::vector<std::string> channel_names;
  std::vector<ManifestEntry> entries;
};

/// Load failure carrying every per-subject problem found, not just the first.
class CohortError : public DataError {
 public:
  explicit CohortError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

nlohmann::json to_json(const CohortManifest& m);
CohortManifest manifest_from_json(const nlohmann::json& j);
CohortManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const CohortManifest& m);

/// Headerless CSV, one row per channel. Values are written in shortest
/// round-trip form, so write -> read is bit-exact.
SignalMatrix read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, const SignalMatrix& m);

/// One Recording per manifest entry, in manifest order, rows reordered to the
/// standard montage order. Throws CohortError listing every failing subject.
std::vector<Recording> load_cohort(const std::filesystem::path& manifest_path,
                                   Exec exec = Exec::Parallel);

/// Writes <dir>/<subject>.csv for each recording plus <dir>/<manifest_name>.
/// Returns the manifest path.
std::filesystem::path write_cohort(const std::filesystem::path& dir,
                                   const std::vector<Recording>& cohort,
                                   const std::string& manifest_name = "manifest.json");

/// Header + rows of string cells. Fields containing commas, quotes or newlines
/// are quoted on write; the reader accepts RFC 4180 quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position; throws DataError when absent.
  std::size_t column(std::string_view name) const;
};
CsvTable read_csv_table(const std::filesystem::path& path);
CsvTable parse_csv_table(std::string_view text);
std::string format_csv_table(const CsvTable& t);
void write_csv_table(const std::filesystem::path& path, const CsvTable& t);

/// Writes `content` to `path` (binary), creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

namespace detail {
void append_double(std::string& out, double v);
double parse_double(std::string_view cell, bool& ok);
}  // namespace detail

}  // namespace eegsweep
