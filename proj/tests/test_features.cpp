// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <numbers>

#include <doctest.h>

#include "eegsweep/dsp.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/numeric.hpp"
#include "eegsweep/synth.hpp"
#include "golden_corpus.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace eegsweep;

namespace {

double feat(const FeatureVector& f, std::string_view name) { return f[feature_index(name)]; }

dsp::Psd make_psd(double df, std::size_t bins, auto fn) {
  dsp::Psd p;
  p.df = df;
  for (std::size_t k = 0; k < bins; ++k) {
    p.freqs.push_back(static_cast<double>(k) * df);
    p.power.push_back(fn(p.freqs.back()));
  }
  return p;
}

}  // namespace

TEST_CASE("feature names: 53 unique names in canonical order") {
  const auto& n = feature_names();
  CHECK(n.size() == 53);
  CHECK(n[0] == "mean");
  CHECK(n[7] == "quantile_75");
  CHECK(n[8] == "hurst_exp");
  CHECK(n[16] == "line_length");
  CHECK(n[17] == "pow_delta");
  CHECK(n[27] == "spect_entropy");
  CHECK(n[32] == "spect_edge_freq_95");
  CHECK(n[33] == "wavelet_energy_d1");
  CHECK(n[39] == "tkeo_mean_d1");
  CHECK(n[52] == "tkeo_std_a6");
  std::set<std::string_view> u(n.begin(), n.end());
  CHECK(u.size() == 53);
  CHECK(feature_index("kurtosis") == 5);
  CHECK_THROWS_AS(feature_index("nope"), ConfigError);
}

TEST_CASE("golden corpus agrees with the direct-formula oracle") {
  const auto& names = feature_names();
  for (const auto& s : golden::corpus()) {
    CAPTURE(s.name);
    const auto got = extract_channel(s.x, golden::kFs);
    const auto want = oracle::features(s.x, golden::kFs);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      CAPTURE(names[k]);
      CAPTURE(got[k]);
      CAPTURE(want[k]);
      CHECK(std::isfinite(got[k]));
      CHECK(golden::agrees(got[k], want[k], golden::regression_based(names[k]) ? 1e-3 : 1e-6));
    }
  }
}

TEST_CASE("db4 filters match the spectral factorization") {
  const auto rec = oracle::daubechies4();
  const auto& h = db4_lowpass();
  for (std::size_t i = 0; i < 8; ++i) CHECK(h[i] == doctest::Approx(rec[7 - i]).epsilon(1e-12));
  // Published reconstruction low-pass, first and last taps.
  CHECK(rec[0] == doctest::Approx(0.23037781330885523).epsilon(1e-12));
  CHECK(rec[7] == doctest::Approx(-0.010597401784997278).epsilon(1e-12));
  // Orthonormality: unit norm, orthogonal to even shifts, highpass orthogonal to lowpass.
  const auto& g = db4_highpass();
  for (int shift = 0; shift < 8; shift += 2) {
    double hh = 0.0, hg = 0.0;
    for (int i = 0; i + shift < 8; ++i) {
      hh += h[i] * h[i + shift];
      hg += h[i] * g[i + shift];
    }
    CHECK(hh == doctest::Approx(shift == 0 ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(hg) < 1e-12);
  }
}

TEST_CASE("extract_channel: 10 Hz sine") {
  const auto x = testutil::sine(10.0, 128, 8);
  const auto f = extract_channel(x, 128);
  CHECK(feat(f, "pow_alpha") >= 0.95);
  CHECK(feat(f, "pow_delta") + feat(f, "pow_theta") + feat(f, "pow_beta") <= 0.05);
  CHECK(std::abs(feat(f, "zero_crossings") - 160.0) <= 1.0);
  CHECK(feat(f, "rms") == doctest::Approx(std::sqrt(0.5)).epsilon(0.001 / 0.7071));
  CHECK(feat(f, "spect_entropy") <= 0.2);
  CHECK(feat(f, "app_entropy") <= 0.3);
  CHECK(feat(f, "energy_alpha") == doctest::Approx(0.5).epsilon(0.04));
  CHECK(feat(f, "energy_delta") <= 0.01);
  CHECK(feat(f, "energy_theta") <= 0.01);
  CHECK(feat(f, "energy_beta") <= 0.01);
  const double w = 2.0 * std::numbers::pi * 10.0 / 128.0;
  CHECK(std::abs(feat(f, "hjorth_mobility") - 2.0 * std::sin(w / 2.0)) <= 1e-3);
  CHECK(feat(f, "spect_edge_freq_95") == doctest::Approx(10.5).epsilon(0.06));
}

TEST_CASE("extract_channel: straight line has Katz dimension exactly 1") {
  std::vector<double> x(1024);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  CHECK(katz_fd(x) == 1.0);
  CHECK(feat(extract_channel(x, 128), "katz_fd") == 1.0);
}

TEST_CASE("extract_channel: Gaussian white noise over seeds") {
  std::vector<double> hurst, higuchi, entropy;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = testutil::white(128 * 16, 9000 + seed);
    entropy.push_back(spectral_entropy(dsp::welch(x, 128)));
    higuchi.push_back(higuchi_fd(x));
    hurst.push_back(hurst_exponent(x));
    if (seed < 10) {
      CHECK(hurst.back() == doctest::Approx(oracle::hurst(x)).epsilon(1e-3));
      CHECK(higuchi.back() == doctest::Approx(oracle::higuchi(x, 10)).epsilon(1e-3));
    }
  }
  CHECK(*std::min_element(entropy.begin(), entropy.end()) >= 0.9);
  CHECK(*std::min_element(higuchi.begin(), higuchi.end()) >= 1.9);
  CHECK(*std::max_element(higuchi.begin(), higuchi.end()) <= 2.0);
  CHECK(mean(hurst) == doctest::Approx(0.5).epsilon(0.1 / 0.5));
  for (double h : hurst) CHECK(std::abs(h - 0.5) <= 0.1);
}

TEST_CASE("extract_channel: degenerate and invalid input") {
  const std::vector<double> flat(256, 1.5);
  const auto f = extract_channel(flat, 128);
  for (double v : f) CHECK(std::isfinite(v));
  CHECK(feat(f, "skewness") == 0.0);
  CHECK(feat(f, "kurtosis") == 0.0);
  CHECK(feat(f, "hjorth_mobility") == 0.0);
  CHECK(feat(f, "hjorth_complexity") == 0.0);
  CHECK(feat(f, "app_entropy") == 0.0);
  CHECK(feat(f, "psd_fit_r2") == 0.0);
  CHECK(feat(f, "higuchi_fd") == 1.0);
  CHECK(feat(f, "katz_fd") == 1.0);
  CHECK(feat(f, "decorr_time_s") >= 1.0 / 128);

  CHECK_THROWS_AS(extract_channel(std::vector<double>(100, 0.0), 128), DataError);
  auto bad = testutil::white(512, 1);
  bad[10] = std::nan("");
  CHECK_THROWS_AS(extract_channel(bad, 128), DataError);
  CHECK_THROWS_AS(extract_channel(testutil::white(512, 1), 0.0), ConfigError);
}

TEST_CASE("feature invariants over random signals") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = seed % 2 ? testutil::white(1024, seed) : pink_noise(1024, 128, seed);
    const auto f = extract_channel(x, 128);
    CHECK(feat(f, "variance") >= 0.0);
    double ps = 0.0;
    for (const char* b : {"pow_delta", "pow_theta", "pow_alpha", "pow_beta"}) {
      CHECK(feat(f, b) >= 0.0);
      CHECK(feat(f, b) <= 1.0);
      ps += feat(f, b);
    }
    CHECK(ps <= 1.0 + 1e-12);
    CHECK(feat(f, "spect_entropy") >= 0.0);
    CHECK(feat(f, "spect_entropy") <= 1.0);
    CHECK(feat(f, "higuchi_fd") >= 1.0);
    CHECK(feat(f, "higuchi_fd") <= 2.0);
    CHECK(feat(f, "katz_fd") >= 1.0);
    CHECK(feat(f, "zero_crossings") == std::round(feat(f, "zero_crossings")));
    CHECK(feat(f, "decorr_time_s") >= 1.0 / 128);
  }
}

TEST_CASE("scale behaviour") {
  const auto x = pink_noise(2048, 128, 31);
  std::vector<double> y(x.size());
  const double c = 3.7;
  std::transform(x.begin(), x.end(), y.begin(), [c](double v) { return c * v + 0.0; });
  const auto fx = extract_channel(x, 128);
  const auto fy = extract_channel(y, 128);
  auto rel = [&](std::string_view n, double factor) {
    CAPTURE(n);
    CHECK(std::abs(feat(fy, n) - factor * feat(fx, n)) <= 1e-6 * std::abs(factor * feat(fx, n)) + 1e-12);
  };
  for (const char* n : {"mean", "std", "rms", "ptp_amp"}) rel(n, c);
  for (const char* n : {"variance", "energy_delta", "energy_theta", "energy_alpha", "energy_beta"}) rel(n, c * c);
  for (const char* n : {"skewness", "kurtosis", "zero_crossings", "hjorth_mobility", "hjorth_complexity",
                        "hjorth_mobility_spect", "hjorth_complexity_spect", "higuchi_fd", "pow_delta",
                        "pow_theta", "pow_alpha", "pow_beta", "spect_entropy", "psd_fit_slope", "psd_fit_r2"})
    rel(n, 1.0);
}

TEST_CASE("circular shift barely changes spectral features") {
  // Five minutes of pink noise: the wrap-around touches one Welch segment of ~300.
  const auto x = pink_noise(128 * 300, 128, 77);
  std::vector<double> y(x.size());
  std::rotate_copy(x.begin(), x.begin() + 1024, x.end(), y.begin());
  const auto fx = extract_channel(x, 128);
  const auto fy = extract_channel(y, 128);
  for (std::string n : {"pow_delta", "pow_theta", "pow_alpha", "pow_beta", "hjorth_mobility_spect",
                        "hjorth_complexity_spect", "psd_fit_intercept", "psd_fit_slope", "psd_fit_r2",
                        "spect_entropy"}) {
    CAPTURE(n);
    CHECK(std::abs(feat(fy, n) - feat(fx, n)) <= 0.01 * std::abs(feat(fx, n)));
  }
  // The edge frequency is quantized to the bin width.
  CHECK(std::abs(feat(fy, "spect_edge_freq_95") - feat(fx, "spect_edge_freq_95")) <= 0.5);
}

TEST_CASE("welch_psd contract examples") {
  const auto x = testutil::sine(10.0, 128, 8);
  const auto p = dsp::welch(x, 128);
  CHECK(p.freqs.front() == 0.0);
  CHECK(p.freqs.back() == 64.0);
  const auto peak = std::max_element(p.power.begin(), p.power.end()) - p.power.begin();
  CHECK(p.freqs[static_cast<std::size_t>(peak)] == 10.0);
}

TEST_CASE("band_powers examples") {
  SUBCASE("6 Hz sine") {
    const auto f = band_powers(dsp::welch(testutil::sine(6.0, 128, 8), 128));
    CHECK(f[1] >= 0.95);
  }
  SUBCASE("2 Hz + 10 Hz equal amplitude") {
    auto a = testutil::sine(2.0, 128, 8), b = testutil::sine(10.0, 128, 8);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    const auto f = band_powers(dsp::welch(a, 128));
    const double ratio = f[0] / f[2];
    CHECK(ratio >= 0.8);
    CHECK(ratio <= 1.25);
    // Two-tone oracle: each tone contributes half the variance.
    CHECK(f[0] + f[2] >= 0.98);
  }
  SUBCASE("flat PSD is proportional to bandwidth") {
    const auto p = make_psd(0.01, 6401, [](double) { return 1.0; });
    const auto f = band_powers(p);
    CHECK(f[0] == doctest::Approx(3.5 / 39.5).epsilon(1e-3));
    CHECK(f[1] == doctest::Approx(4.0 / 39.5).epsilon(1e-3));
    CHECK(f[2] == doctest::Approx(5.0 / 39.5).epsilon(1e-3));
    CHECK(f[3] == doctest::Approx(17.0 / 39.5).epsilon(1e-3));
  }
  SUBCASE("zero PSD") {
    const auto f = band_powers(make_psd(0.5, 129, [](double) { return 0.0; }));
    for (double v : f) CHECK(v == 0.0);
  }
}

TEST_CASE("hjorth examples") {
  SUBCASE("sampled sinusoid: closed form") {
    // Each first difference scales a sinusoid by 2 sin(w/2), so complexity is 1.
    // 30 s keeps the partial-period edge bias of the finite variances below 1e-3.
    const double w = 2.0 * std::numbers::pi * 10.0 / 128.0;
    const auto h = hjorth(testutil::sine(10.0, 128, 30));
    CHECK(std::abs(h.mobility - 2.0 * std::sin(w / 2.0)) <= 1e-3);
    CHECK(std::abs(h.complexity - 1.0) <= 1e-3);
  }
  SUBCASE("white noise complexity > 1") {
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(hjorth(testutil::white(1024, s)).complexity > 1.0);
  }
  SUBCASE("constant signal sentinel") {
    const auto h = hjorth(std::vector<double>(300, -4.0));
    CHECK(h.mobility == 0.0);
    CHECK(h.complexity == 0.0);
  }
  SUBCASE("spectral moments of a two-line spectrum") {
    dsp::Psd p;
    p.freqs = {0.0, 2.0, 4.0};
    p.power = {0.0, 1.0, 1.0};
    const auto h = hjorth_spectral(p);
    CHECK(h.mobility == doctest::Approx(std::sqrt(20.0 / 2.0)));
    CHECK(h.complexity == doctest::Approx(std::sqrt(272.0 / 20.0) / std::sqrt(10.0)));
  }
}

TEST_CASE("fractal examples") {
  // A pure 10 Hz tone scores about 1.51 under the standard curve-length
  // regression (the oracle agrees); slower tones fall inside [1, 1.3].
  const double fd10 = higuchi_fd(testutil::sine(10.0, 128, 8));
  CHECK(fd10 == doctest::Approx(oracle::higuchi(testutil::sine(10.0, 128, 8), 10)).epsilon(1e-9));
  CHECK(fd10 == doctest::Approx(1.509).epsilon(0.01));
  for (double f : {1.0, 2.0, 4.0, 6.0}) {
    CAPTURE(f);
    const double fd = higuchi_fd(testutil::sine(f, 128, 8));
    CHECK(fd >= 1.0);
    CHECK(fd <= 1.3);
  }
  CHECK(higuchi_fd(std::vector<double>(10, 1.0)) == 1.0);
  CHECK(katz_fd(std::vector<double>(10, 1.0)) == 1.0);
}

TEST_CASE("entropy examples") {
  SUBCASE("constant signal: ApEn sentinel") { CHECK(approximate_entropy(std::vector<double>(500, 7.0)) == 0.0); }
  SUBCASE("ApEn matches the brute-force oracle") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto x = testutil::white(700, 50 + s);
      CHECK(approximate_entropy(x) == doctest::Approx(oracle::apen(x, 2, 0.2)).epsilon(1e-12));
    }
    const auto q = testutil::sine(3.0, 128, 4);
    CHECK(approximate_entropy(q, 3, 0.1) == doctest::Approx(oracle::apen(q, 3, 0.1)).epsilon(1e-12));
  }
  SUBCASE("white noise decorrelates at the first lag") {
    // Lag-1 sample autocovariance of white noise is centred on zero, so the
    // first non-positive lag is 1 in about half the realizations; it is the
    // mode, and later lags are rare.
    std::map<int, int> hist;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const double d = decorrelation_time(testutil::white(128 * 16, 1000 + s), 128);
      ++hist[static_cast<int>(std::lround(d * 128))];
    }
    auto mode = std::max_element(hist.begin(), hist.end(), [](auto& a, auto& b) { return a.second < b.second; });
    CHECK(mode->first == 1);
    CHECK(hist[1] + hist[2] + hist[3] >= 90);
  }
  SUBCASE("decorrelation time of a slow tone is a quarter period") {
    // ACF of a sine ~ cos(2 pi f lag); first non-positive lag just past T/4.
    const double d = decorrelation_time(testutil::sine(1.1, 128, 16), 128);
    CHECK(d == doctest::Approx(1.0 / (4 * 1.1)).epsilon(0.03));
  }
}

TEST_CASE("psd_fit examples") {
  SUBCASE("exact power law") {
    const auto p = make_psd(0.5, 129, [](double f) { return f > 0 ? std::pow(f, -2.0) : 0.0; });
    const auto fit = psd_fit(p);
    CHECK(std::abs(fit.slope + 2.0) <= 1e-6);
    CHECK(std::abs(fit.r2 - 1.0) <= 1e-9);
    CHECK(fit.mse <= 1e-12);
    CHECK(std::abs(fit.intercept) <= 1e-9);
  }
  SUBCASE("constant PSD") {
    const auto fit = psd_fit(make_psd(0.5, 129, [](double) { return 3.0; }));
    CHECK(std::abs(fit.slope) <= 1e-12);
    CHECK(fit.intercept == doctest::Approx(std::log10(3.0)));
    CHECK(fit.r2 == 0.0);
  }
  SUBCASE("pink noise slope") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto fit = psd_fit(dsp::welch(pink_noise(128 * 30, 128, s), 128));
      CHECK(std::abs(fit.slope + 1.0) <= 0.3);
    }
  }
}

TEST_CASE("band_energies examples") {
  const auto x = testutil::sine(10.0, 128, 8);
  const auto e = band_energies(x, 128);
  CHECK(std::abs(e[2] - 0.5) <= 0.02);
  CHECK(e[0] <= 0.01);
  CHECK(e[1] <= 0.01);
  CHECK(e[3] <= 0.01);
  for (double v : band_energies(std::vector<double>(1024, 0.0), 128)) CHECK(v == 0.0);
  std::vector<double> y = testutil::white(1024, 4);
  const auto ey0 = band_energies(y, 128);
  for (double& v : y) v *= 2.0;
  const auto ey1 = band_energies(y, 128);
  for (std::size_t b = 0; b < 4; ++b) CHECK(ey1[b] == doctest::Approx(4.0 * ey0[b]).epsilon(0.01));
}

TEST_CASE("wavelet_features examples") {
  SUBCASE("zero signal") {
    const auto w = wavelet_features(std::vector<double>(1024, 0.0));
    for (double v : w.energy) CHECK(v == 0.0);
    for (double v : w.tkeo_stats) CHECK(v == 0.0);
  }
  SUBCASE("orthogonal transform preserves impulse energy") {
    std::vector<double> x(1024, 0.0);
    x[512] = 1.0;
    const auto d = dwt(x, 6);
    double total = 0.0;
    for (const auto& c : d.details)
      for (double v : c) total += v * v;
    for (double v : d.approximation) total += v * v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    const auto w = wavelet_features(x);
    double via_features = 0.0;
    for (std::size_t k = 0; k < 6; ++k) via_features += w.energy[k] * static_cast<double>(d.details[k].size());
    for (double v : d.approximation) via_features += v * v;
    CHECK(via_features == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("32 Hz sine sits in the two finest detail bands") {
    const auto d = dwt(testutil::sine(32.0, 128, 8), 6);
    std::array<double, 6> e{};
    double total = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
      for (double v : d.details[k]) e[k] += v * v;
      total += e[k];
    }
    CHECK((e[0] + e[1]) / total >= 0.9);
  }
  SUBCASE("coefficient counts halve per level") {
    const auto d = dwt(testutil::white(1000, 1), 6);
    CHECK(d.details[0].size() == 500);
    CHECK(d.details[1].size() == 250);
    CHECK(d.details[2].size() == 125);
    CHECK(d.details[3].size() == 63);
    CHECK(d.approximation.size() == 16);
  }
  SUBCASE("too short") {
    CHECK_THROWS_WITH_AS(wavelet_features(std::vector<double>(71, 1.0)),
                         doctest::Contains("too short for 6-level DWT"), DataError);
    CHECK_NOTHROW(wavelet_features(std::vector<double>(72, 1.0)));
  }
  SUBCASE("tkeo of a sampled sinusoid is constant") {
    // x_n = A sin(w n): x_n^2 - x_{n-1} x_{n+1} = A^2 sin^2(w).
    const auto x = testutil::sine(5.0, 128, 2, 1.5);
    const double w = 2.0 * std::numbers::pi * 5.0 / 128.0;
    for (double v : tkeo(x)) CHECK(v == doctest::Approx(2.25 * std::sin(w) * std::sin(w)).epsilon(1e-9));
  }
}

TEST_CASE("build_feature_matrix shapes and naming") {
  set_warning_sink([](std::string_view) {});
  std::vector<Recording> cohort;
  for (int i = 0; i < 121; ++i) {
    auto r = testutil::noise_recording(128, 4, static_cast<std::uint64_t>(i));
    r.subject_id = "S" + std::to_string(1000 + i);
    r.label = i % 2 ? Label::ADHD : Label::TD;
    cohort.push_back(std::move(r));
  }
  CleaningPipeline raw;
  const auto m1 = build_feature_matrix(cohort, raw, {1, 1}, {"P3"}, {}, Exec::Serial);
  CHECK(m1.n_rows() == 121);
  CHECK(m1.n_cols() == 53);
  CHECK(m1.columns[5] == "P3:kurtosis");
  CHECK(m1.labels[1] == 1);
  CHECK(m1.subject_ids[3] == "S1003");
  const auto m2 = build_feature_matrix(cohort, raw, {1, 1}, {"P3", "P4"}, {}, Exec::Parallel);
  CHECK(m2.n_cols() == 106);
  CHECK(m2.columns[53] == "P4:mean");
  CHECK(m2.values.leftCols(53) == m1.values);
  // Row values are exactly the per-channel extraction.
  const auto p3 = static_cast<Eigen::Index>(Montage::standard_1020().require_index("P3"));
  const auto direct = extract_channel(cohort[7].channel(p3), 128);
  for (std::size_t k = 0; k < kFeatureCount; ++k) CHECK(m1.values(7, static_cast<Eigen::Index>(k)) == direct[k]);
  CHECK_THROWS_AS(build_feature_matrix(cohort, raw, {1, 1}, {}, {}, Exec::Serial), ConfigError);
  CHECK_THROWS_AS(build_feature_matrix(cohort, raw, {1, 1}, {"Xx"}, {}, Exec::Serial), ConfigError);

  // Segmented extraction uses the chunk only.
  const auto mh = build_feature_matrix(cohort, raw, {2, 2}, {"P3"}, {}, Exec::Serial);
  const auto half = segment(cohort[7], {2, 2});
  CHECK(mh.values(7, 0) == mean(half.channel(p3)));

  testutil::ScratchDir dir("features");
  write_feature_csv(dir / "m.csv", m2);
  const auto back = read_feature_csv(dir / "m.csv");
  CHECK(back.columns == m2.columns);
  CHECK(back.labels == m2.labels);
  CHECK(back.values == m2.values);
  set_warning_sink(nullptr);
}

TEST_CASE("extract_recording serial and parallel agree") {
  const auto r = testutil::noise_recording(128, 5, 8);
  const auto a = extract_recording(r, {}, Exec::Serial);
  const auto b = extract_recording(r, {}, Exec::Parallel);
  CHECK(a.rows() == 19);
  CHECK(a == b);
}
