// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "eegsweep/io.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double chi2_sf(double x, double df) {
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

double f_sf(double x, double d1, double d2) {
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(d1, d2), x));
}

double t_two_sided(double t, double df) {
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::abs(t)));
}

/// Normal approximation to the sample skewness (D'Agostino 1970).
double skew_z(double g1, double n) {
  const double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double a = std::sqrt(2.0 / (w2 - 1.0));
  return delta * std::asinh(y / a);
}

/// Normal approximation to the sample kurtosis (Anscombe & Glynn 1983).
double kurtosis_z(double b2, double n) {
  const double e = 3.0 * (n - 1.0) / (n + 1.0);
  const double var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (b2 - e) / std::sqrt(var);
  const double sb1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                     std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
  const double a = 6.0 + 8.0 / sb1 * (2.0 / sb1 + std::sqrt(1.0 + 4.0 / (sb1 * sb1)));
  const double term1 = 1.0 - 2.0 / (9.0 * a);
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  const double term2 = std::copysign(std::cbrt((1.0 - 2.0 / a) / std::abs(denom)), denom);
  return (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
}

std::vector<double> abs_deviation(std::span<const double> x, LeveneCenter c) {
  const double centre = c == LeveneCenter::Mean ? mean(x) : median(x);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::abs(x[i] - centre);
  return z;
}

}  // namespace

void validate(const SelectionConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

NormalityResult dagostino_pearson(std::span<const double> x, double alpha) {
  if (x.size() < kMinNormalitySample) throw DataError("sample too small for omnibus normality test");
  for (double v : x)
    if (!std::isfinite(v)) throw DataError("non-finite value in normality test");
  const double n = static_cast<double>(x.size());
  const double mu = mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  NormalityResult r;
  // Relative threshold: a column constant up to rounding has no shape to test.
  if (!(m2 > 1e-24 * std::max(1.0, mu * mu))) {
    r.k2 = kInf;
    r.p = 0.0;
    r.normal = false;
    return r;
  }
  const double zs = skew_z(m3 / std::pow(m2, 1.5), n);
  const double zk = kurtosis_z(m4 / (m2 * m2), n);
  r.k2 = zs * zs + zk * zk;
  r.p = chi2_sf(r.k2, 2.0);
  r.normal = r.p >= alpha;
  return r;
}

TestResult bartlett(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DataError("Bartlett test needs two samples per group");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = variance(a, 1), vb = variance(b, 1);
  if (!(va > 0.0) || !(vb > 0.0)) throw DataError("Bartlett test undefined for a zero-variance group");
  const double big_n = na + nb, k = 2.0;
  const double sp = ((na - 1.0) * va + (nb - 1.0) * vb) / (big_n - k);
  const double num = (big_n - k) * std::log(sp) - (na - 1.0) * std::log(va) - (nb - 1.0) * std::log(vb);
  const double corr = 1.0 + (1.0 / (3.0 * (k - 1.0))) * (1.0 / (na - 1.0) + 1.0 / (nb - 1.0) - 1.0 / (big_n - k));
  TestResult r;
  r.statistic = std::max(0.0, num / corr);
  r.p = chi2_sf(r.statistic, k - 1.0);
  return r;
}

TestResult levene(std::span<const double> a, std::span<const double> b, LeveneCenter center) {
  if (a.size() < 2 || b.size() < 2) throw DataError("Levene test needs two samples per group");
  const auto za = abs_deviation(a, center), zb = abs_deviation(b, center);
  const double na = static_cast<double>(za.size()), nb = static_cast<double>(zb.size());
  const double ma = mean(za), mb = mean(zb);
  const double grand = (na * ma + nb * mb) / (na + nb);
  const double between = na * (ma - grand) * (ma - grand) + nb * (mb - grand) * (mb - grand);
  double within = 0.0;
  for (double v : za) within += (v - ma) * (v - ma);
  for (double v : zb) within += (v - mb) * (v - mb);
  const double df2 = na + nb - 2.0;
  TestResult r;
  // Compare with a rounding-level floor so identical deviation sets give exactly 0.
  const double scale = std::max(grand * grand, 1e-300);
  if (!(between > 1e-24 * scale * (na + nb))) {
    r.statistic = 0.0;
  } else if (!(within > 0.0)) {
    r.statistic = kInf;
  } else {
    r.statistic = df2 * between / within;
  }
  r.p = f_sf(r.statistic, 1.0, df2);
  return r;
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant v) {
  if (a.size() < 2 || b.size() < 2) throw DataError("t-test needs two samples per group");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double diff = mean(a) - mean(b);
  const double va = variance(a, 1), vb = variance(b, 1);
  TTestResult r;
  double se2 = 0.0;
  if (v == TTestVariant::Student) {
    r.df = na + nb - 2.0;
    const double sp = ((na - 1.0) * va + (nb - 1.0) * vb) / r.df;
    se2 = sp * (1.0 / na + 1.0 / nb);
  } else {
    const double qa = va / na, qb = vb / nb;
    se2 = qa + qb;
    const double den = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
    r.df = den > 0.0 ? se2 * se2 / den : na + nb - 2.0;
  }
  if (diff == 0.0) {
    r.t = 0.0;
  } else if (!(se2 > 0.0)) {
    r.t = std::copysign(kInf, diff);
  } else {
    r.t = diff / std::sqrt(se2);
  }
  r.p = t_two_sided(r.t, r.df);
  return r;
}

std::string to_string(VarianceTest v) { return v == VarianceTest::Bartlett ? "Bartlett" : "Levene"; }

std::string to_string(MeanTest m) {
  switch (m) {
    case MeanTest::Student: return "Student";
    case MeanTest::Welch: return "Welch";
    case MeanTest::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::string to_string(LeveneCenter c) { return c == LeveneCenter::Mean ? "mean" : "median"; }

LeveneCenter levene_center_from_string(std::string_view s) {
  if (s == "mean") return LeveneCenter::Mean;
  if (s == "median") return LeveneCenter::Median;
  throw ConfigError("unknown Levene centre '" + std::string(s) + "' (expected mean or median)");
}

std::vector<std::size_t> SelectionReport::kept() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].selected) out.push_back(i);
  return out;
}

namespace {

SelectionRow evaluate_column(const std::string& name, const std::vector<double>& adhd,
                             const std::vector<double>& td, const SelectionConfig& cfg) {
  SelectionRow row;
  row.column = name;
  const auto na = dagostino_pearson(adhd, cfg.alpha);
  const auto nt = dagostino_pearson(td, cfg.alpha);
  row.normal_adhd = na.normal;
  row.normal_td = nt.normal;
  row.normality_p_adhd = na.p;
  row.normality_p_td = nt.p;
  const bool both_normal = na.normal && nt.normal;
  row.variance_test = both_normal ? VarianceTest::Bartlett : VarianceTest::Levene;

  const double va = variance(adhd, 1), vt = variance(td, 1);
  if (!(va > 0.0) || !(vt > 0.0)) {
    row.variance_p = 0.0;
    row.homoscedastic = false;
    row.mean_test = MeanTest::Indeterminate;
    row.note = "zero variance in a group";
    return row;
  }
  row.variance_p = both_normal ? bartlett(adhd, td).p : levene(adhd, td, cfg.levene_center).p;
  row.homoscedastic = row.variance_p >= cfg.alpha;
  if (row.homoscedastic) {
    row.mean_test = MeanTest::Student;
  } else if (both_normal) {
    row.mean_test = MeanTest::Welch;
  } else {
    row.mean_test = MeanTest::Indeterminate;
    row.note = "non-normal and heteroscedastic";
    return row;
  }
  const auto t = t_test(adhd, td, row.mean_test == MeanTest::Student ? TTestVariant::Student : TTestVariant::Welch);
  row.statistic = t.t;
  row.p_value = t.p;
  row.selected = t.p < cfg.alpha;
  return row;
}

}  // namespace

SelectionReport selection_report(const FeatureMatrix& m, const SelectionConfig& cfg, Exec exec) {
  validate(cfg);
  if (static_cast<std::size_t>(m.n_rows()) != m.labels.size()) throw DataError("label count does not match rows");
  if (static_cast<std::size_t>(m.n_cols()) != m.columns.size()) throw DataError("column names do not match columns");
  std::vector<Eigen::Index> adhd_rows, td_rows;
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    if (m.labels[i] == 1) adhd_rows.push_back(static_cast<Eigen::Index>(i));
    else if (m.labels[i] == 0) td_rows.push_back(static_cast<Eigen::Index>(i));
    else throw DataError("labels must be 0 (TD) or 1 (ADHD)");
  }
  if (adhd_rows.size() < kMinNormalitySample || td_rows.size() < kMinNormalitySample)
    throw DataError("sample too small for omnibus normality test: need at least 20 subjects per group");

  SelectionReport rep;
  rep.alpha = cfg.alpha;
  rep.rows.resize(m.columns.size());
  std::vector<std::string> errors(m.columns.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (std::int64_t jj = 0; jj < static_cast<std::int64_t>(m.columns.size()); ++jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    std::vector<double> a, t;
    for (auto r : adhd_rows) a.push_back(m.values(r, j));
    for (auto r : td_rows) t.push_back(m.values(r, j));
    try {
      rep.rows[static_cast<std::size_t>(jj)] = evaluate_column(m.columns[static_cast<std::size_t>(jj)], a, t, cfg);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(jj)] = m.columns[static_cast<std::size_t>(jj)] + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  return rep;
}

SelectionResult select_features(const FeatureMatrix& m, const SelectionConfig& cfg, Exec exec) {
  SelectionResult out;
  out.report = selection_report(m, cfg, exec);
  out.matrix = m.select_columns(out.report.kept());
  return out;
}

std::vector<std::string> check_report(const SelectionReport& r) {
  std::vector<std::string> bad;
  for (const auto& row : r.rows) {
    auto fail = [&](const std::string& why) { bad.push_back(row.column + ": " + why); };
    const bool both = row.normal_adhd && row.normal_td;
    if (both != (row.variance_test == VarianceTest::Bartlett)) fail("variance test does not follow normality");
    if (row.homoscedastic && row.mean_test != MeanTest::Student && row.note.empty()) fail("homoscedastic but not Student");
    if (!row.homoscedastic && both && row.mean_test != MeanTest::Welch && row.note.empty())
      fail("normal heteroscedastic but not Welch");
    if (!row.homoscedastic && !both && row.mean_test != MeanTest::Indeterminate)
      fail("non-normal heteroscedastic but not Indeterminate");
    if (row.mean_test == MeanTest::Indeterminate && (row.selected || row.p_value)) fail("Indeterminate row carries a decision");
    if (row.selected && !(row.p_value && *row.p_value < r.alpha)) fail("selected without p < alpha");
    if (!row.selected && row.p_value && *row.p_value < r.alpha) fail("p < alpha but not selected");
  }
  return bad;
}

std::string format_selection_csv(const SelectionReport& r) {
  CsvTable t;
  t.header = {"column",        "normal_adhd", "normal_td",  "normality_p_adhd", "normality_p_td",
              "variance_test", "variance_p",  "homoscedastic", "mean_test",     "statistic",
              "p_value",       "selected",    "note"};
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  for (const auto& row : r.rows)
    t.rows.push_back({row.column, flag(row.normal_adhd), flag(row.normal_td), format_double(row.normality_p_adhd),
                      format_double(row.normality_p_td), to_string(row.variance_test), format_double(row.variance_p),
                      flag(row.homoscedastic), to_string(row.mean_test), opt(row.statistic), opt(row.p_value),
                      flag(row.selected), row.note});
  return format_csv_table(t);
}

void write_selection_csv(const std::filesystem::path& path, const SelectionReport& r) {
  write_text_file(path, format_selection_csv(r));
}

}  // namespace eegsweep
