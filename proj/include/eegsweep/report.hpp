// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Aggregation of sweep records: grouped box-plot statistics, significance
// marking between groups, per-channel topographic data and feature-importance
// listings, with CSV/SVG emitters.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eegsweep/classify.hpp"
#include "eegsweep/io.hpp"
#include "eegsweep/sweep.hpp"

namespace eegsweep {

/// Tukey box-plot statistics with type-7 (linear interpolation) quantiles.
struct BoxStats {
  std::size_t n = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
  double whisker_low = 0.0, whisker_high = 0.0;  // furthest points within 1.5 IQR of the box
  std::vector<double> outliers;                  // ascending
};

/// DataError on an empty sample.
BoxStats box_stats(std::vector<double> values);

/// Columns records can be grouped by: the results-table columns
/// ("Cleaning technique", "Chunk", "Channels", "Classifier", "Feature Selection?",
/// "Hyperparameters") plus the derived "Channel count" and "Divisor".
std::string group_value(const ExperimentRecord& r, std::string_view column);

struct GroupSummary {
  std::vector<std::string> key;  // one value per group-by column
  BoxStats stats;
};

/// One summary per distinct key over successful records, in order of first appearance.
std::vector<GroupSummary> summarize(const std::vector<ExperimentRecord>& records,
                                    const std::vector<std::string>& group_by);

struct SignificanceResult {
  std::string a, b;
  std::size_t n_a = 0, n_b = 0;
  std::optional<double> t, p;  // empty when either group has fewer than two values
  bool significant = false;
  std::string note;  // "insufficient data" when untestable
};

/// Two-sided Welch t-test on accuracy between the groups named by each pair of
/// `factor` values; significant iff p < alpha.
std::vector<SignificanceResult> mark_significance(const std::vector<ExperimentRecord>& records,
                                                  std::string_view factor,
                                                  const std::vector<std::pair<std::string, std::string>>& pairs,
                                                  double alpha = 0.05);

enum class Reduce { Max, Median };
std::string to_string(Reduce r);
Reduce reduce_from_string(std::string_view s);

struct TopomapPoint {
  std::string channel;
  double x = 0.0, y = 0.0;
  double value = 0.0;
  std::size_t n = 0;  // records containing the channel
};

/// Per montage channel, `reduce` over accuracies of successful records whose
/// subset contains it. Channels without records are omitted.
std::vector<TopomapPoint> topomap_data(const std::vector<ExperimentRecord>& records, Reduce reduce);

/// The channel with the largest value (ties: montage order). Empty input -> nullopt.
std::optional<std::string> topomap_argmax(const std::vector<TopomapPoint>& points);

struct ImportanceRow {
  std::size_t rank = 0;
  std::string feature;
  double gain = 0.0;
  double share = 0.0;  // of total gain over all used features
};

/// Top `top_n` features by gain; ties ordered by feature name.
std::vector<ImportanceRow> importance_report(const std::vector<FeatureImportance>& ranking, std::size_t top_n = 15);

CsvTable summary_table(const std::vector<GroupSummary>& s, const std::vector<std::string>& group_by);
CsvTable significance_table(const std::vector<SignificanceResult>& s);
CsvTable topomap_table(const std::vector<TopomapPoint>& p);
CsvTable importance_table(const std::vector<ImportanceRow>& rows);

/// Minimal standalone SVG box plot (one box per summary, accuracy on the y axis).
std::string box_plot_svg(const std::vector<GroupSummary>& s, const std::string& title);

}  // namespace eegsweep
