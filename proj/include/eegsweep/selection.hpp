// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Univariate two-group hypothesis tests and the normality -> homoscedasticity
// -> mean-difference cascade that decides which feature columns are kept.

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eegsweep/core.hpp"
#include "eegsweep/features.hpp"

namespace eegsweep {

enum class LeveneCenter { Mean, Median };

struct SelectionConfig {
  double alpha = 0.05;
  LeveneCenter levene_center = LeveneCenter::Mean;
};

void validate(const SelectionConfig& c);

struct TestResult {
  double statistic = 0.0;
  double p = 1.0;
};

struct NormalityResult {
  double k2 = 0.0;
  double p = 0.0;
  bool normal = false;
};

/// Smallest sample accepted by the omnibus normality test.
inline constexpr std::size_t kMinNormalitySample = 20;

/// D'Agostino-Pearson omnibus K^2 test. Zero-variance samples are reported
/// non-normal with p = 0. DataError for n < 20.
NormalityResult dagostino_pearson(std::span<const double> x, double alpha = 0.05);

/// Two-group Bartlett test (chi-square, 1 df). DataError if a group has
/// zero variance or fewer than two samples.
TestResult bartlett(std::span<const double> a, std::span<const double> b);

/// Two-group Levene test: one-way ANOVA F on absolute deviations from the group centre.
TestResult levene(std::span<const double> a, std::span<const double> b,
                  LeveneCenter center = LeveneCenter::Mean);

enum class TTestVariant { Student, Welch };

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant v);

enum class VarianceTest { Bartlett, Levene };
enum class MeanTest { Student, Welch, Indeterminate };

std::string to_string(VarianceTest v);
std::string to_string(MeanTest m);
std::string to_string(LeveneCenter c);
LeveneCenter levene_center_from_string(std::string_view s);

struct SelectionRow {
  std::string column;
  bool normal_adhd = false;
  bool normal_td = false;
  double normality_p_adhd = 0.0;
  double normality_p_td = 0.0;
  VarianceTest variance_test = VarianceTest::Levene;
  double variance_p = 0.0;
  bool homoscedastic = false;
  MeanTest mean_test = MeanTest::Indeterminate;
  std::optional<double> statistic;
  std::optional<double> p_value;
  bool selected = false;
  std::string note;  // why a column was routed to Indeterminate, if it was
};

struct SelectionReport {
  double alpha = 0.05;
  std::vector<SelectionRow> rows;

  std::vector<std::size_t> kept() const;
};

struct SelectionResult {
  FeatureMatrix matrix;  // kept columns, input order; labels retained
  SelectionReport report;
};

/// Runs the cascade on every column of `m`, using rows labelled 1 (ADHD) and 0 (TD).
SelectionReport selection_report(const FeatureMatrix& m, const SelectionConfig& cfg = {},
                                 Exec exec = Exec::Parallel);

SelectionResult select_features(const FeatureMatrix& m, const SelectionConfig& cfg = {},
                                Exec exec = Exec::Parallel);

/// Route-consistency violations of a report; empty when the report is coherent.
std::vector<std::string> check_report(const SelectionReport& r);

std::string format_selection_csv(const SelectionReport& r);
void write_selection_csv(const std::filesystem::path& path, const SelectionReport& r);

}  // namespace eegsweep
