// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "eegsweep/numeric.hpp"
#include "eegsweep/selection.hpp"

namespace eegsweep {

BoxStats box_stats(std::vector<double> v) {
  if (v.empty()) throw DataError("box statistics of an empty group");
  std::sort(v.begin(), v.end());
  BoxStats b;
  b.n = v.size();
  b.min = v.front();
  b.max = v.back();
  b.mean = mean(v);
  b.q1 = quantile(v, 0.25);
  b.median = quantile(v, 0.5);
  b.q3 = quantile(v, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo = b.q1 - 1.5 * iqr, hi = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double x : v) {
    if (x < lo || x > hi) {
      b.outliers.push_back(x);
    } else {
      b.whisker_low = std::min(b.whisker_low, x);
      b.whisker_high = std::max(b.whisker_high, x);
    }
  }
  return b;
}

std::string group_value(const ExperimentRecord& r, std::string_view column) {
  const auto& s = r.spec;
  if (column == "Cleaning technique") return to_string(s.cleaning);
  if (column == "Chunk") return to_string(s.chunk);
  if (column == "Channels") return s.channels_label();
  if (column == "Classifier") return to_string(s.classifier);
  if (column == "Feature Selection?") return s.feature_selection ? "Yes" : "No";
  if (column == "Hyperparameters") return r.hyperparameters;
  if (column == "Channel count") return std::to_string(s.channels.size());
  if (column == "Divisor") return std::to_string(s.chunk.divisor);
  throw ConfigError("cannot group by '" + std::string(column) + "'");
}

std::vector<GroupSummary> summarize(const std::vector<ExperimentRecord>& records,
                                    const std::vector<std::string>& group_by) {
  for (const auto& c : group_by) group_value(ExperimentRecord{}, c);  // validates column names
  std::vector<std::vector<std::string>> order;
  std::map<std::vector<std::string>, std::vector<double>> groups;
  for (const auto& r : records) {
    if (!r.ok() || !r.accuracy) continue;
    std::vector<std::string> key;
    for (const auto& c : group_by) key.push_back(group_value(r, c));
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(*r.accuracy);
  }
  std::vector<GroupSummary> out;
  for (const auto& k : order) out.push_back({k, box_stats(groups[k])});
  return out;
}

std::vector<SignificanceResult> mark_significance(const std::vector<ExperimentRecord>& records,
                                                  std::string_view factor,
                                                  const std::vector<std::pair<std::string, std::string>>& pairs,
                                                  double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : records)
    if (r.ok() && r.accuracy) groups[group_value(r, factor)].push_back(*r.accuracy);
  std::vector<SignificanceResult> out;
  for (const auto& [a, b] : pairs) {
    SignificanceResult s;
    s.a = a;
    s.b = b;
    const auto& ga = groups[a];
    const auto& gb = groups[b];
    s.n_a = ga.size();
    s.n_b = gb.size();
    if (ga.size() < 2 || gb.size() < 2) {
      s.note = "insufficient data";
    } else {
      const auto t = t_test(ga, gb, TTestVariant::Welch);
      s.t = t.t;
      s.p = t.p;
      s.significant = t.p < alpha;
    }
    out.push_back(s);
  }
  return out;
}

std::string to_string(Reduce r) { return r == Reduce::Max ? "max" : "median"; }

Reduce reduce_from_string(std::string_view s) {
  if (s == "max") return Reduce::Max;
  if (s == "median") return Reduce::Median;
  throw ConfigError("unknown reducer '" + std::string(s) + "' (expected max or median)");
}

std::vector<TopomapPoint> topomap_data(const std::vector<ExperimentRecord>& records, Reduce reduce) {
  const Montage& montage = Montage::standard_1020();
  std::vector<std::vector<double>> per(montage.size());
  for (const auto& r : records) {
    if (!r.ok() || !r.accuracy) continue;
    for (const auto& ch : r.spec.channels) per[montage.require_index(ch)].push_back(*r.accuracy);
  }
  std::vector<TopomapPoint> out;
  for (std::size_t c = 0; c < montage.size(); ++c) {
    if (per[c].empty()) continue;
    TopomapPoint p;
    p.channel = montage.names()[c];
    p.x = montage.coords()[c].x;
    p.y = montage.coords()[c].y;
    p.n = per[c].size();
    p.value = reduce == Reduce::Max ? *std::max_element(per[c].begin(), per[c].end()) : quantile(per[c], 0.5);
    out.push_back(p);
  }
  return out;
}

std::optional<std::string> topomap_argmax(const std::vector<TopomapPoint>& points) {
  if (points.empty()) return std::nullopt;
  const auto it = std::max_element(points.begin(), points.end(),
                                   [](const auto& a, const auto& b) { return a.value < b.value; });
  return it->channel;
}

std::vector<ImportanceRow> importance_report(const std::vector<FeatureImportance>& ranking, std::size_t top_n) {
  std::vector<FeatureImportance> r = ranking;
  std::stable_sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
    return a.gain != b.gain ? a.gain > b.gain : a.feature < b.feature;
  });
  double total = 0.0;
  for (const auto& f : r) total += f.gain;
  std::vector<ImportanceRow> out;
  for (std::size_t i = 0; i < r.size() && i < top_n; ++i)
    out.push_back({i + 1, r[i].feature, r[i].gain, total > 0.0 ? r[i].gain / total : 0.0});
  return out;
}

CsvTable summary_table(const std::vector<GroupSummary>& s, const std::vector<std::string>& group_by) {
  CsvTable t;
  t.header = group_by;
  for (const char* h : {"n", "min", "whisker_low", "q1", "median", "q3", "whisker_high", "max", "mean", "outliers"})
    t.header.emplace_back(h);
  for (const auto& g : s) {
    auto row = g.key;
    const auto& b = g.stats;
    row.push_back(std::to_string(b.n));
    for (double v : {b.min, b.whisker_low, b.q1, b.median, b.q3, b.whisker_high, b.max, b.mean})
      row.push_back(format_double(v));
    std::string outl;
    for (double v : b.outliers) outl += (outl.empty() ? "" : ";") + format_double(v);
    row.push_back(outl);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable significance_table(const std::vector<SignificanceResult>& s) {
  CsvTable t;
  t.header = {"group_a", "group_b", "n_a", "n_b", "t", "p", "significant", "note"};
  for (const auto& r : s)
    t.rows.push_back({r.a, r.b, std::to_string(r.n_a), std::to_string(r.n_b), r.t ? format_double(*r.t) : "",
                      r.p ? format_double(*r.p) : "", r.significant ? "yes" : "no", r.note});
  return t;
}

CsvTable topomap_table(const std::vector<TopomapPoint>& p) {
  CsvTable t;
  t.header = {"channel", "x", "y", "value", "n"};
  for (const auto& q : p)
    t.rows.push_back({q.channel, format_double(q.x), format_double(q.y), format_double(q.value), std::to_string(q.n)});
  return t;
}

CsvTable importance_table(const std::vector<ImportanceRow>& rows) {
  CsvTable t;
  t.header = {"rank", "feature", "gain", "share"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.rank), r.feature, format_double(r.gain), format_double(r.share)});
  return t;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string box_plot_svg(const std::vector<GroupSummary>& s, const std::string& title) {
  const double box_w = 40.0, gap = 30.0, left = 60.0, top = 40.0, plot_h = 300.0;
  const double width = left + static_cast<double>(s.size()) * (box_w + gap) + gap;
  const double height = top + plot_h + 90.0;
  double lo = 1.0, hi = 0.0;
  for (const auto& g : s) {
    lo = std::min(lo, g.stats.min);
    hi = std::max(hi, g.stats.max);
  }
  if (s.empty() || hi <= lo) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, lo + 1.0);
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto y = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << xml_escape(title) << "</text>\n";
  o << "<line x1=\"" << left - 10 << "\" y1=\"" << top << "\" x2=\"" << left - 10 << "\" y2=\"" << top + plot_h
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    o << "<text x=\"" << left - 14 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"10\">" << v << "</text>\n";
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& b = s[i].stats;
    const double x0 = left + gap / 2 + static_cast<double>(i) * (box_w + gap), xc = x0 + box_w / 2;
    o << "<line x1=\"" << xc << "\" y1=\"" << y(b.whisker_high) << "\" x2=\"" << xc << "\" y2=\"" << y(b.whisker_low)
      << "\" stroke=\"black\"/>\n";
    o << "<rect x=\"" << x0 << "\" y=\"" << y(b.q3) << "\" width=\"" << box_w << "\" height=\""
      << std::max(0.5, y(b.q1) - y(b.q3)) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << x0 << "\" y1=\"" << y(b.median) << "\" x2=\"" << x0 + box_w << "\" y2=\"" << y(b.median)
      << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double v : b.outliers)
      o << "<circle cx=\"" << xc << "\" cy=\"" << y(v) << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
    std::string label;
    for (const auto& k : s[i].key) label += (label.empty() ? "" : " / ") + k;
    o << "<text x=\"" << xc << "\" y=\"" << top + plot_h + 14 << "\" transform=\"rotate(45 " << xc << ' '
      << top + plot_h + 14 << ")\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace eegsweep
