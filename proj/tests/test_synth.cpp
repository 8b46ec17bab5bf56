// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <boost/math/distributions/students_t.hpp>
#include <doctest.h>

#include "eegsweep/dsp.hpp"
#include "eegsweep/numeric.hpp"
#include "eegsweep/synth.hpp"
#include "helpers.hpp"

using namespace eegsweep;

namespace {

// Relative theta power computed directly from the Welch PSD.
double theta_fraction(std::span<const double> x, double fs) {
  const auto p = dsp::welch(x, fs);
  double th = 0.0, tot = 0.0;
  for (std::size_t k = 0; k < p.freqs.size(); ++k) {
    if (p.freqs[k] >= 0.5 && p.freqs[k] < 40.0) tot += p.power[k];
    if (p.freqs[k] >= 4.0 && p.freqs[k] < 8.0) th += p.power[k];
  }
  return th / tot;
}

double band_power(std::span<const double> x, double fs, double lo, double hi) {
  const auto p = dsp::welch(x, fs, {128, 0.5});
  double s = 0.0;
  for (std::size_t k = 0; k < p.freqs.size(); ++k)
    if (p.freqs[k] >= lo && p.freqs[k] < hi) s += p.power[k];
  return s;
}

double student_p(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double sp = ((na - 1) * variance(a, 1) + (nb - 1) * variance(b, 1)) / (na + nb - 2);
  const double t = (mean(a) - mean(b)) / std::sqrt(sp * (1 / na + 1 / nb));
  boost::math::students_t dist(na + nb - 2);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

Recording zero_recording(double fs, double seconds) {
  return testutil::montage_recording(SignalMatrix::Zero(19, static_cast<Eigen::Index>(fs * seconds)), fs);
}

}  // namespace

TEST_CASE("null effect: classes indistinguishable on target theta power") {
  int not_significant = 0;
  constexpr int kReps = 40;
  for (int rep = 0; rep < kReps; ++rep) {
    SynthSpec s;
    s.n_subjects_per_class = 20;
    s.duration_s = 4.0;
    s.rng_seed = 1000 + static_cast<std::uint64_t>(rep) * 97;
    s.class_effect.effect_size = 1.0;
    const auto c = generate_cohort(s, Exec::Serial);
    const std::size_t p3 = Montage::standard_1020().require_index("P3");
    std::vector<double> a, b;
    for (const auto& r : c.recordings)
      (r.label == Label::ADHD ? a : b).push_back(theta_fraction(r.channel(static_cast<Eigen::Index>(p3)), 128));
    not_significant += student_p(a, b) > 0.05;
  }
  CHECK(not_significant >= kReps * 9 / 10);
}

TEST_CASE("theta effect 2.0 at P3 raises class-1 relative theta power") {
  SynthSpec s;
  s.n_subjects_per_class = 20;
  s.duration_s = 20.0;
  s.class_effect = {"P3", FeatureAxis::ThetaPower, 2.0};
  const auto c = generate_cohort(s);
  const std::size_t p3 = Montage::standard_1020().require_index("P3");
  std::vector<double> a, b;
  for (const auto& r : c.recordings)
    (r.label == Label::ADHD ? a : b).push_back(theta_fraction(r.channel(static_cast<Eigen::Index>(p3)), 128));
  CHECK(mean(a) > mean(b));
  CHECK(student_p(a, b) < 0.01);
  // Class 1 comes first.
  CHECK(c.recordings.front().label == Label::ADHD);
  CHECK(c.recordings.back().label == Label::TD);
}

TEST_CASE("kurtosis effect raises the target channel kurtosis") {
  SynthSpec s;
  s.n_subjects_per_class = 10;
  s.duration_s = 30.0;
  s.class_effect = {"O1", FeatureAxis::Kurtosis, 4.0};
  const auto c = generate_cohort(s);
  const auto o1 = static_cast<Eigen::Index>(Montage::standard_1020().require_index("O1"));
  auto kurt = [](std::span<const double> x) {
    const double m = mean(x), v = variance(x);
    double k = 0.0;
    for (double e : x) k += std::pow(e - m, 4);
    return k / static_cast<double>(x.size()) / (v * v) - 3.0;
  };
  std::vector<double> a, b;
  for (const auto& r : c.recordings) (r.label == Label::ADHD ? a : b).push_back(kurt(r.channel(o1)));
  CHECK(mean(a) > mean(b) + 0.5);
}

TEST_CASE("blinks at known instants: mask marks exactly those windows") {
  SynthSpec s;
  s.n_subjects_per_class = 1;
  s.duration_s = 20.0;
  ArtifactSpec b;
  b.kind = ArtifactKind::Blink;
  b.amplitude = 10.0;
  b.onsets_s = {2.0, 7.5, 13.0};
  s.artifacts = {b};
  const auto c = generate_cohort(s);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& mask = c.truth.masks[i];
    const auto len = static_cast<std::size_t>(std::lround(0.6 * 128));
    std::vector<std::uint8_t> expect(mask.size(), 0);
    for (double t : b.onsets_s) {
      const auto s0 = static_cast<std::size_t>(std::lround(t * 128));
      for (std::size_t k = s0; k < s0 + len; ++k) expect[k] = 1;
    }
    CHECK(mask == expect);
    REQUIRE(c.truth.events[i].size() == 3);
    CHECK(c.truth.events[i][1].start == 960);
  }
}

TEST_CASE("superposition: recording = clean + injected contributions") {
  SynthSpec s;
  s.n_subjects_per_class = 2;
  s.duration_s = 10.0;
  s.artifacts = {{ArtifactKind::Blink, 8.0, 12.0, 0.0, {}, {}},
                 {ArtifactKind::Line50Hz, 0.5, 0.0, 0.0, {}, {}},
                 {ArtifactKind::MuscleBurst, 3.0, 6.0, 0.0, {}, {}}};
  const auto c = generate_cohort(s);
  for (std::size_t i = 0; i < c.recordings.size(); ++i) {
    const SignalMatrix diff = c.recordings[i].samples - c.truth.clean[i];
    CHECK(diff.norm() > 0.0);
    // Outside transient masks, the only contribution is the line noise (amplitude 0.5 * bg rms).
    const Recording bg = generate_background(s, i, c.recordings[i].label);
    CHECK((bg.samples - c.truth.clean[i]).norm() == 0.0);
  }
  // Single injection is exact to the bit.
  const Recording bg = generate_background(s, 0, Label::ADHD);
  const Injection inj = inject_artifact(bg, s.artifacts[0], 5);
  CHECK((inj.recording.samples - (bg.samples + inj.contribution)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("determinism: identical spec gives bit-identical cohorts, serial or parallel") {
  SynthSpec s;
  s.n_subjects_per_class = 3;
  s.duration_s = 6.0;
  s.artifacts = {{ArtifactKind::Blink, 8.0, 10.0, 0.0, {}, {}}, {ArtifactKind::BadChannel, 3.0, 0.0, 0.0, {}, "T7"}};
  const auto a = generate_cohort(s, Exec::Serial);
  const auto b = generate_cohort(s, Exec::Parallel);
  REQUIRE(a.recordings.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.recordings[i].samples == b.recordings[i].samples);
    CHECK(a.truth.masks[i] == b.truth.masks[i]);
  }
  s.rng_seed = 2;
  const auto c = generate_cohort(s, Exec::Serial);
  CHECK(c.recordings[0].samples != a.recordings[0].samples);
}

TEST_CASE("inject_artifact examples") {
  const double fs = 128;
  SUBCASE("line_50hz on a zero signal: single PSD peak at 50 Hz") {
    const auto inj = inject_artifact(zero_recording(fs, 8), {ArtifactKind::Line50Hz, 2.0, 0, 0, {}, {}}, 1);
    const auto p = dsp::welch(inj.recording.channel(10), fs);
    const auto k = static_cast<std::size_t>(std::max_element(p.power.begin(), p.power.end()) - p.power.begin());
    CHECK(p.freqs[k] == doctest::Approx(50.0));
    for (std::size_t j = 0; j < p.freqs.size(); ++j)
      if (std::abs(p.freqs[j] - 50.0) > 2.0) CHECK(p.power[j] < 1e-3 * p.power[k]);
    CHECK(std::all_of(inj.mask.begin(), inj.mask.end(), [](auto m) { return m == 0; }));
  }
  SUBCASE("blink at 5 s on a zero signal: Fp1 exceeds O1") {
    ArtifactSpec b{ArtifactKind::Blink, 50.0, 0, 0, {5.0}, {}};
    const auto inj = inject_artifact(zero_recording(fs, 10), b, 1);
    const auto& m = Montage::standard_1020();
    auto peak = [&](const char* ch) {
      const auto x = inj.recording.channel(static_cast<Eigen::Index>(m.require_index(ch)));
      double v = 0.0;
      for (std::size_t t = 640; t < 640 + 77; ++t) v = std::max(v, std::abs(x[t]));
      return v;
    };
    CHECK(peak("Fp1") > peak("O1"));
    CHECK(peak("Fp1") == doctest::Approx(50.0));
    CHECK(peak("Fz") < peak("Fp1"));
    CHECK(peak("Cz") > peak("O1"));
    // Blink energy is low frequency.
    const auto fp1 = inj.recording.channel(0);
    CHECK(band_power(fp1, fs, 0.5, 4.0) > 5.0 * band_power(fp1, fs, 4.0, 64.0));
  }
  SUBCASE("muscle burst: 20-45 Hz power inside the mask >= 10x outside") {
    auto r = testutil::noise_recording(fs, 30, 9);
    r.samples *= 0.2;
    ArtifactSpec mu{ArtifactKind::MuscleBurst, 3.0, 0, 0, {4.0, 14.0, 24.0}, {}};
    const auto inj = inject_artifact(r, mu, 3);
    REQUIRE(inj.events.size() == 3);
    const auto ch = *inj.events[0].channel;
    const std::string name = Montage::standard_1020().names()[ch];
    CHECK((name == "F7" || name == "F8" || name == "T7" || name == "T8"));
    const auto x = inj.recording.channel(static_cast<Eigen::Index>(ch));
    std::vector<double> in, out;
    for (std::size_t t = 0; t < x.size(); ++t) {
      bool masked = false;
      for (const auto& e : inj.events)
        if (*e.channel == ch && static_cast<Eigen::Index>(t) >= e.start && static_cast<Eigen::Index>(t) < e.end) masked = true;
      (masked ? in : out).push_back(x[t]);
    }
    CHECK(band_power(in, fs, 20, 45) >= 10.0 * band_power(out, fs, 20, 45));
  }
  SUBCASE("bad channel replaces one channel") {
    auto r = testutil::noise_recording(fs, 10, 2);
    const auto inj = inject_artifact(r, {ArtifactKind::BadChannel, 30.0, 0, 0, {}, "C3"}, 4);
    const auto c3 = static_cast<Eigen::Index>(Montage::standard_1020().require_index("C3"));
    CHECK(rms(inj.recording.channel(c3)) == doctest::Approx(30.0).epsilon(0.05));
    CHECK(correlation(inj.recording.channel(c3), r.channel(c3)) < 0.1);
    CHECK(inj.recording.samples.row(0) == r.samples.row(0));
  }
}

TEST_CASE("spec validation and JSON round trip") {
  SynthSpec s;
  s.class_effect.target_channel = "XX";
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.class_effect.target_channel = "P3";
  s.artifacts = {{ArtifactKind::Blink, -1.0, 6, 0, {}, {}}};
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.artifacts = {{ArtifactKind::MuscleBurst, 2.0, 6, 0, {}, "T8"}};
  s.duration_s = 1.0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.duration_s = 12.5;
  const SynthSpec back = synth_spec_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));
  CHECK_THROWS_AS(artifact_kind_from_string("heartbeat"), ConfigError);
  CHECK_THROWS_AS(synth_spec_from_json(nlohmann::json{{"artifacts", {{{"kind", "blink"}, {"amplitude", 0.0}}}}}),
                  ConfigError);
}

TEST_CASE("pink noise has a -1 log-log PSD slope") {
  std::vector<double> slopes;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = pink_noise(128 * 60, 128, seed);
    const auto p = dsp::welch(x, 128);
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < p.freqs.size(); ++k)
      if (p.freqs[k] >= 1.0 && p.freqs[k] <= 40.0) {
        lx.push_back(std::log10(p.freqs[k]));
        ly.push_back(std::log10(p.power[k]));
      }
    const double mx = mean(lx), my = mean(ly);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    CHECK(sxy / sxx == doctest::Approx(-1.0).epsilon(0.3));
    CHECK(variance(x) == doctest::Approx(1.0));
  }
}

TEST_CASE("ground-truth JSON describes events and class effect") {
  SynthSpec s;
  s.n_subjects_per_class = 1;
  s.duration_s = 10.0;
  s.artifacts = {{ArtifactKind::Blink, 8.0, 0, 0, {1.0}, {}}};
  const auto c = generate_cohort(s);
  const auto j = ground_truth_json(s, c);
  CHECK(j["class_effect"]["target_channel"] == "P3");
  CHECK(j["subjects"].size() == 2);
  CHECK(j["subjects"][0]["events"][0]["start_s"] == doctest::Approx(1.0));
  CHECK(j["subjects"][0]["events"][0]["kind"] == "blink");
}
