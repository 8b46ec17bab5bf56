// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Reference values marked "fixture" were computed once with an independent
// statistics package and frozen.

#include <random>

#include <boost/math/distributions/normal.hpp>
#include <doctest.h>

#include "eegsweep/io.hpp"
#include "eegsweep/selection.hpp"
#include "eegsweep/synth.hpp"
#include "helpers.hpp"

using namespace eegsweep;

namespace {

const std::vector<double> kSample22{0.3, -1.2, 2.5, 0.1,  0.9, -0.4, 1.7,  -2.2, 0.05, 0.6, 3.1,
                                    -0.8, 0.2, 1.1, -1.5, 0.7, 2.2,  -0.3, 0.4,  5.0,  -0.9, 0.0};
const std::vector<double> kC{2.1, 3.5, 1.9, 4.4, 2.8, 3.0, 3.9, 2.2, 1.5, 3.3};
const std::vector<double> kD{1.0, 6.2, 0.5, 5.4, 2.9, 7.1, -0.3, 4.4, 3.8, 8.0, 2.2};

std::vector<double> draw(auto& dist, std::mt19937_64& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

FeatureMatrix null_matrix(std::size_t cols, std::uint64_t seed) {
  FeatureMatrix m;
  m.values.resize(121, static_cast<Eigen::Index>(cols));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < m.values.size(); ++i) m.values.data()[i] = g(rng);
  for (std::size_t j = 0; j < cols; ++j) m.columns.push_back("X" + std::to_string(j) + ":f");
  for (int i = 0; i < 121; ++i) {
    m.labels.push_back(i < 61 ? 1 : 0);
    m.subject_ids.push_back("S" + std::to_string(i));
  }
  return m;
}

}  // namespace

TEST_CASE("D'Agostino-Pearson omnibus test") {
  SUBCASE("fixture") {
    const auto r = dagostino_pearson(kSample22);
    CHECK(r.k2 == doctest::Approx(6.019363679838053).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.04930736390002824).epsilon(1e-9));
    CHECK_FALSE(r.normal);
    CHECK(dagostino_pearson(kSample22, 0.01).normal);
  }
  SUBCASE("Monte-Carlo calibration") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::exponential_distribution<double> e(1.0);
    int normal_ok = 0, expo_rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
      normal_ok += dagostino_pearson(draw(g, rng, 61)).normal;
      expo_rejected += !dagostino_pearson(draw(e, rng, 61)).normal;
    }
    CHECK(normal_ok >= 90);
    CHECK(expo_rejected >= 95);
  }
  SUBCASE("degenerate and invalid input") {
    const auto r = dagostino_pearson(std::vector<double>(30, 4.2));
    CHECK_FALSE(r.normal);
    CHECK(r.p == 0.0);
    CHECK_THROWS_WITH_AS(dagostino_pearson(std::vector<double>(19, 1.0)),
                         "sample too small for omnibus normality test", DataError);
  }
  SUBCASE("location-scale invariant") {
    std::vector<double> y = kSample22;
    for (double& v : y) v = 3.0 * v - 7.0;
    CHECK(dagostino_pearson(y).k2 == doctest::Approx(dagostino_pearson(kSample22).k2).epsilon(1e-10));
  }
}

TEST_CASE("Bartlett and Levene") {
  SUBCASE("fixtures") {
    const auto b = bartlett(kC, kD);
    CHECK(b.statistic == doctest::Approx(8.692369777715756).epsilon(1e-9));
    CHECK(b.p == doctest::Approx(0.003195448947564092).epsilon(1e-9));
    const auto lm = levene(kC, kD, LeveneCenter::Mean);
    CHECK(lm.statistic == doctest::Approx(10.164300733340143).epsilon(1e-9));
    CHECK(lm.p == doctest::Approx(0.004841056238683945).epsilon(1e-9));
    const auto ld = levene(kC, kD, LeveneCenter::Median);
    CHECK(ld.statistic == doctest::Approx(9.96370595959878).epsilon(1e-9));
    CHECK(ld.p == doctest::Approx(0.00519606517455309).epsilon(1e-9));
  }
  SUBCASE("identical samples") {
    const auto b = bartlett(kC, kC);
    CHECK(b.statistic == doctest::Approx(0.0).scale(1.0));
    CHECK(b.p == doctest::Approx(1.0));
  }
  SUBCASE("shifted samples have identical deviations") {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
    const auto l = levene(a, b);
    CHECK(l.statistic == 0.0);
    CHECK(l.p == 1.0);
  }
  SUBCASE("unequal variances rejected") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g1(0.0, 1.0), g3(0.0, 3.0);
    int bart = 0, lev = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = draw(g1, rng, 61), b = draw(g3, rng, 60);
      bart += bartlett(a, b).p < 0.05;
      lev += levene(a, b).p < 0.05;
    }
    CHECK(bart >= 95);
    CHECK(lev >= 95);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(bartlett(std::vector<double>(5, 1.0), kC), DataError);
    CHECK_THROWS_AS(levene(std::vector<double>{1.0}, kC), DataError);
  }
}

TEST_CASE("t-tests") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{3, 4, 5, 6, 7};
  SUBCASE("equal samples") {
    const auto r = t_test(a, a, TTestVariant::Student);
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
  }
  SUBCASE("hand-computed Student example") {
    // Means 3 and 5, both variances 2.5: pooled se = sqrt(2.5 * 2/5) = 1, t = -2.
    const auto r = t_test(a, b, TTestVariant::Student);
    CHECK(r.t == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(r.df == 8.0);
    // fixture
    CHECK(r.p == doctest::Approx(0.08051623795726257).epsilon(1e-9));
    const auto w = t_test(a, b, TTestVariant::Welch);
    CHECK(w.t == doctest::Approx(-2.0));
    CHECK(w.df == doctest::Approx(8.0));
  }
  SUBCASE("Welch fixture") {
    const auto r = t_test(kC, kD, TTestVariant::Welch);
    CHECK(r.t == doctest::Approx(-1.0031714696553449).epsilon(1e-9));
    CHECK(r.df == doctest::Approx(12.465019035700404).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.33485524921779974).epsilon(1e-9));
  }
  SUBCASE("swap symmetry") {
    for (auto v : {TTestVariant::Student, TTestVariant::Welch}) {
      const auto x = t_test(kC, kD, v), y = t_test(kD, kC, v);
      CHECK(x.t == doctest::Approx(-y.t));
      CHECK(x.p == doctest::Approx(y.p));
    }
  }
  SUBCASE("Student p for 2 df has a closed form") {
    // For 2 df the two-sided tail is 1 - t / sqrt(2 + t^2).
    const std::vector<double> p{0.0, 2.0}, q{3.0, 4.0};
    const auto s = t_test(p, q, TTestVariant::Student);
    REQUIRE(s.df == 2.0);
    const double t = std::abs(s.t);
    CHECK(s.p == doctest::Approx(1.0 - t / std::sqrt(2.0 + t * t)).epsilon(1e-12));
  }
}

TEST_CASE("select_features: null calibration") {
  const auto m = null_matrix(1000, 7);
  const auto res = select_features(m);
  const double frac = static_cast<double>(res.matrix.n_cols()) / 1000.0;
  CHECK(frac >= 0.02);
  CHECK(frac <= 0.09);
  CHECK(check_report(res.report).empty());
  CHECK(res.matrix.labels == m.labels);
  // Kept columns preserve input order.
  const auto kept = res.report.kept();
  CHECK(std::is_sorted(kept.begin(), kept.end()));
  for (std::size_t i = 0; i < kept.size(); ++i) CHECK(res.matrix.columns[i] == m.columns[kept[i]]);
  // Deterministic and independent of the execution policy.
  const auto again = selection_report(m, {}, Exec::Serial);
  REQUIRE(again.rows.size() == res.report.rows.size());
  for (std::size_t i = 0; i < again.rows.size(); ++i) {
    CHECK(again.rows[i].selected == res.report.rows[i].selected);
    CHECK(again.rows[i].variance_p == res.report.rows[i].variance_p);
  }
}

TEST_CASE("select_features: routing") {
  auto m = null_matrix(4, 3);
  // Exact normal quantiles, so the normality route is not left to chance.
  const boost::math::normal_distribution<double> std_normal;
  auto z = [&](int i, int n) { return boost::math::quantile(std_normal, (i + 0.5) / n); };
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> e(1.0);
  for (Eigen::Index i = 0; i < 121; ++i) {
    const bool adhd = m.labels[static_cast<std::size_t>(i)] == 1;
    const int k = adhd ? static_cast<int>(i) : static_cast<int>(i) - 61;
    const int n = adhd ? 61 : 60;
    m.values(i, 0) = z(k, n) + (adhd ? 1.5 : 0.0);           // normal, shifted -> Student, selected
    m.values(i, 1) = z((k * 7) % n, n) * (adhd ? 4.0 : 1.0);  // normal, heteroscedastic -> Welch
    m.values(i, 2) = e(rng) * (adhd ? 6.0 : 1.0);            // skewed, heteroscedastic -> Indeterminate
    m.values(i, 3) = adhd ? 1.0 : 2.0;                       // constant in each group
  }
  const auto rep = selection_report(m);
  CHECK(rep.rows[0].variance_test == VarianceTest::Bartlett);
  CHECK(rep.rows[0].mean_test == MeanTest::Student);
  CHECK(rep.rows[0].selected);
  CHECK(rep.rows[1].variance_test == VarianceTest::Bartlett);
  CHECK(rep.rows[1].mean_test == MeanTest::Welch);
  CHECK(rep.rows[2].variance_test == VarianceTest::Levene);
  CHECK(rep.rows[2].mean_test == MeanTest::Indeterminate);
  CHECK_FALSE(rep.rows[2].selected);
  CHECK_FALSE(rep.rows[2].p_value.has_value());
  CHECK(rep.rows[3].mean_test == MeanTest::Indeterminate);
  CHECK(rep.rows[3].note == "zero variance in a group");
  CHECK(check_report(rep).empty());

  const auto table = parse_csv_table(format_selection_csv(rep));
  CHECK(table.header.front() == "column");
  CHECK(table.rows.size() == 4);
  CHECK(table.rows[1][table.column("mean_test")] == "Welch");
  CHECK(table.rows[0][table.column("selected")] == "true");
}

TEST_CASE("select_features: all-constant columns") {
  auto m = null_matrix(5, 1);
  m.values.setConstant(3.0);
  const auto res = select_features(m);
  CHECK(res.matrix.n_cols() == 0);
  CHECK(res.matrix.labels.size() == 121);
  for (const auto& r : res.report.rows) CHECK(r.mean_test == MeanTest::Indeterminate);
}

TEST_CASE("select_features: validation") {
  auto m = null_matrix(3, 1);
  SelectionConfig bad;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(select_features(m, bad), ConfigError);
  const auto small = m.select_rows({0, 1, 2, 70, 71, 72});
  CHECK_THROWS_AS(select_features(small), DataError);
  CHECK(levene_center_from_string("median") == LeveneCenter::Median);
  CHECK_THROWS_AS(levene_center_from_string("trimmed"), ConfigError);
}

TEST_CASE("select_features: injected theta effect at P3 is found") {
  set_warning_sink([](std::string_view) {});
  SynthSpec s;
  s.n_subjects_per_class = 30;
  s.duration_s = 30;
  s.rng_seed = 11;
  s.class_effect.effect_size = 2.0;
  const auto c = generate_cohort(s, Exec::Parallel);
  const auto m = build_feature_matrix(c.recordings, CleaningPipeline{}, {1, 1}, {"P3", "O1"}, {}, Exec::Parallel);
  const auto res = select_features(m);
  const auto& cols = res.matrix.columns;
  CHECK(std::find(cols.begin(), cols.end(), "P3:pow_theta") != cols.end());
  set_warning_sink(nullptr);
}
