// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace eegsweep {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string msg = "cohort failed to load:";
  for (const auto& i : issues) msg += "\n  " + i;
  return msg;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CohortError::CohortError(std::vector<std::string> issues)
    : DataError(join_issues(issues)), issues_(std::move(issues)) {}

namespace detail {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

double parse_double(std::string_view cell, bool& ok) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
    cell.remove_suffix(1);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  ok = !cell.empty() && ec == std::errc() && ptr == cell.data() + cell.size();
  return v;
}

}  // namespace detail

std::string format_double(double v) {
  std::string s;
  detail::append_double(s, v);
  return s;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DataError("missing CSV column '" + std::string(name) + "'");
}

namespace {

void append_field(std::string& out, const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) {
    out += f;
    return;
  }
  out.push_back('"');
  for (char c : f) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    append_field(out, row[i]);
  }
  out.push_back('\n');
}

}  // namespace

std::string format_csv_table(const CsvTable& t) {
  std::string out;
  append_row(out, t.header);
  for (const auto& r : t.rows) append_row(out, r);
  return out;
}

void write_csv_table(const fs::path& path, const CsvTable& t) {
  write_text_file(path, format_csv_table(t));
}

namespace {

CsvTable parse_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        records.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw DataError(source + ": unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  CsvTable t;
  if (records.empty()) throw DataError(source + ": empty CSV");
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size())
      throw DataError(source + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(records[r].size()) + " fields, header has " +
                      std::to_string(t.header.size()));
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

}  // namespace

CsvTable read_csv_table(const fs::path& path) { return parse_csv(read_file(path), path.filename().string()); }

CsvTable parse_csv_table(std::string_view text) { return parse_csv(text, "CSV"); }

void write_text_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) { return read_file(path); }

json to_json(const CohortManifest& m) {
  json subjects = json::array();
  for (const auto& e : m.entries)
    subjects.push_back({{"id", e.subject_id}, {"label", to_int(e.label)}, {"path", e.data_path}});
  return {{"sample_rate_hz", m.sample_rate_hz}, {"channels", m.channel_names}, {"subjects", subjects}};
}

CohortManifest manifest_from_json(const json& j) {
  CohortManifest m;
  try {
    m.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    m.channel_names = j.at("channels").get<std::vector<std::string>>();
    for (const auto& s : j.at("subjects")) {
      ManifestEntry e;
      e.subject_id = s.at("id").get<std::string>();
      int label = s.at("label").get<int>();
      if (label != 0 && label != 1)
        throw DataError("subject " + e.subject_id + ": label must be 0 or 1");
      e.label = static_cast<Label>(label);
      e.data_path = s.at("path").get<std::string>();
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed manifest: ") + ex.what());
  }
  if (!(m.sample_rate_hz > 0.0)) throw DataError("manifest sample_rate_hz must be positive");
  return m;
}

CohortManifest read_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& ex) {
    throw DataError("manifest " + path.string() + " does not parse: " + ex.what());
  }
  return manifest_from_json(j);
}

void write_manifest(const fs::path& path, const CohortManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(m).dump(2) << '\n';
}

SignalMatrix read_signal_csv(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t col = 0;
    std::size_t cpos = 0;
    while (true) {
      std::size_t cend = line.find(',', cpos);
      if (cend == std::string_view::npos) cend = line.size();
      bool ok = false;
      double v = detail::parse_double(line.substr(cpos, cend - cpos), ok);
      ++col;
      if (!ok) {
        throw DataError(path.filename().string() + ": non-numeric cell at row " +
                        std::to_string(line_no) + ", column " + std::to_string(col));
      }
      if (!std::isfinite(v)) {
        throw DataError(path.filename().string() + ": NaN/Inf cell at row " +
                        std::to_string(line_no) + ", column " + std::to_string(col));
      }
      row.push_back(v);
      if (cend == line.size()) break;
      cpos = cend + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path.filename().string() + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(row.size()) + " columns, expected " +
                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  SignalMatrix m(static_cast<Eigen::Index>(rows.size()),
                 rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

void write_signal_csv(const fs::path& path, const SignalMatrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out.push_back(',');
      detail::append_double(out, m(r, c));
    }
    out.push_back('\n');
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

std::vector<Recording> load_cohort(const fs::path& manifest_path, Exec exec) {
  const CohortManifest m = read_manifest(manifest_path);
  const Montage& montage = Montage::standard_1020();

  std::vector<std::string> issues;
  // Manifest row order -> montage order.
  std::vector<Eigen::Index> row_of_montage(montage.size(), -1);
  if (m.channel_names.size() != montage.size()) {
    issues.push_back("manifest lists " + std::to_string(m.channel_names.size()) +
                     " channels, expected " + std::to_string(montage.size()));
  } else {
    for (std::size_t r = 0; r < m.channel_names.size(); ++r) {
      auto idx = montage.index_of(m.channel_names[r]);
      if (!idx) {
        issues.push_back("manifest channel '" + m.channel_names[r] + "' is not a 10-20 label");
      } else if (row_of_montage[*idx] != -1) {
        issues.push_back("manifest channel '" + m.channel_names[r] + "' listed twice");
      } else {
        row_of_montage[*idx] = static_cast<Eigen::Index>(r);
      }
    }
  }
  std::set<std::string> seen;
  for (const auto& e : m.entries)
    if (!seen.insert(e.subject_id).second) issues.push_back("duplicate subject_id " + e.subject_id);
  if (!issues.empty()) throw CohortError(std::move(issues));

  const fs::path base = manifest_path.parent_path();
  const auto n = static_cast<std::int64_t>(m.entries.size());
  std::vector<Recording> out(m.entries.size());
  std::vector<std::string> per_subject(m.entries.size());

#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& e = m.entries[static_cast<std::size_t>(i)];
    std::string& err = per_subject[static_cast<std::size_t>(i)];
    fs::path p = fs::path(e.data_path).is_absolute() ? fs::path(e.data_path) : base / e.data_path;
    if (!fs::exists(p)) {
      err = "subject " + e.subject_id + ": missing file " + p.string();
      continue;
    }
    try {
      SignalMatrix raw = read_signal_csv(p);
      if (raw.rows() != static_cast<Eigen::Index>(montage.size())) {
        err = "subject " + e.subject_id + ": channel count " + std::to_string(raw.rows()) +
              " \xE2\x89\xA0 " + std::to_string(montage.size());
        continue;
      }
      Recording r;
      r.subject_id = e.subject_id;
      r.label = e.label;
      r.sample_rate_hz = m.sample_rate_hz;
      r.channel_names = montage.names();
      r.samples.resize(raw.rows(), raw.cols());
      for (std::size_t c = 0; c < montage.size(); ++c)
        r.samples.row(static_cast<Eigen::Index>(c)) = raw.row(row_of_montage[c]);
      auto violations = validate_recording(r);
      if (!violations.empty()) {
        err = "subject " + e.subject_id + ": " + to_string(violations.front());
        continue;
      }
      out[static_cast<std::size_t>(i)] = std::move(r);
    } catch (const DataError& ex) {
      err = "subject " + e.subject_id + ": " + ex.what();
    }
  }
  for (auto& err : per_subject)
    if (!err.empty()) issues.push_back(std::move(err));
  if (!issues.empty()) throw CohortError(std::move(issues));
  return out;
}

fs::path write_cohort(const fs::path& dir, const std::vector<Recording>& cohort,
                      const std::string& manifest_name) {
  fs::create_directories(dir);
  CohortManifest m;
  if (!cohort.empty()) {
    m.sample_rate_hz = cohort.front().sample_rate_hz;
    m.channel_names = cohort.front().channel_names;
  }
  for (const auto& r : cohort) {
    const std::string file = r.subject_id + ".csv";
    write_signal_csv(dir / file, r.samples);
    m.entries.push_back({r.subject_id, r.label, file});
  }
  const fs::path mp = dir / manifest_name;
  write_manifest(mp, m);
  return mp;
}

}  // namespace eegsweep
