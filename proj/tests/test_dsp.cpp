// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "eegsweep/cleaning.hpp"
#include "eegsweep/dsp.hpp"
#include "eegsweep/numeric.hpp"
#include "helpers.hpp"

using namespace eegsweep;

namespace {

// Direct zero-phase convolution with mirror extension: y[i] = sum_k h[k] x[i + c - k].
std::vector<double> direct_filter(const std::vector<double>& x, const std::vector<double>& h) {
  const auto n = static_cast<long>(x.size());
  const auto c = static_cast<long>(h.size() / 2);
  auto at = [&](long i) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return x[static_cast<std::size_t>(i)];
  };
  std::vector<double> y(x.size(), 0.0);
  for (long i = 0; i < n; ++i)
    for (long k = 0; k < static_cast<long>(h.size()); ++k) y[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(k)] * at(i + c - k);
  return y;
}

Recording single_tone_recording(double f, double fs, double seconds, double amp = 1.0) {
  const auto x = testutil::sine(f, fs, seconds, amp);
  SignalMatrix s(19, static_cast<Eigen::Index>(x.size()));
  for (Eigen::Index c = 0; c < 19; ++c)
    for (Eigen::Index t = 0; t < s.cols(); ++t) s(c, t) = x[static_cast<std::size_t>(t)];
  return testutil::montage_recording(s, fs);
}

double interior_rms(std::span<const double> x, std::size_t skip) {
  return rms(x.subspan(skip, x.size() - 2 * skip));
}

}  // namespace

TEST_CASE("kernel length rule: ceil(3.3 fs / transition), forced odd") {
  CHECK(dsp::hamming_kernel_length(0.5, 128) == 845);
  CHECK(dsp::hamming_kernel_length(10.0, 128) == 43);
  CHECK(dsp::hamming_kernel_length(1.0, 128) == 423);
  CHECK(design_fir(FirParams{}, 128).size() == 845);
}

TEST_CASE("FIR frequency response: >= 40 dB at 50 Hz, [1, 35] Hz within +/-1 dB, DC removed") {
  const auto h = design_fir(FirParams{}, 128);
  const double g50 = std::abs(dsp::kernel_gain(h, 50.0, 128));
  CHECK(20.0 * std::log10(g50) <= -40.0);
  for (double f = 1.0; f <= 35.0; f += 0.25) {
    CAPTURE(f);
    const double db = 20.0 * std::log10(std::abs(dsp::kernel_gain(h, f, 128)));
    CHECK(std::abs(db) <= 1.0);
  }
  CHECK(std::abs(dsp::kernel_gain(h, 0.0, 128)) < 1e-2);
}

TEST_CASE("fir_bandpass examples") {
  const double fs = 128;
  SUBCASE("50 Hz tone: output RMS <= 1% of input once past the edge transients") {
    const auto r = single_tone_recording(50.0, fs, 30.0);
    const auto y = fir_bandpass(r, FirParams{});
    const std::size_t skip = 845 / 2;
    CHECK(interior_rms(y.channel(0), skip) <= 0.01 * interior_rms(r.channel(0), skip));
    // The reflection-padded edges leak a little of the tone; bounded but not < 1%.
    CHECK(rms(y.channel(0)) <= 0.05 * rms(r.channel(0)));
  }
  SUBCASE("10 Hz tone: output RMS within 10%") {
    const auto r = single_tone_recording(10.0, fs, 30.0);
    const auto y = fir_bandpass(r, FirParams{});
    CHECK(std::abs(rms(y.channel(3)) / rms(r.channel(3)) - 1.0) < 0.1);
  }
  SUBCASE("DC only: output ~ 0 after the edge transients") {
    auto r = testutil::montage_recording(SignalMatrix::Constant(19, 128 * 30, 5.0), fs);
    const auto y = fir_bandpass(r, FirParams{});
    const std::size_t skip = 845;
    double worst = 0.0;
    for (std::size_t t = skip; t + skip < static_cast<std::size_t>(y.n_samples()); ++t)
      worst = std::max(worst, std::abs(y.channel(0)[t]));
    CHECK(worst < 0.05);
  }
  SUBCASE("shape preserved") {
    const auto r = testutil::noise_recording(fs, 20, 3);
    const auto y = fir_bandpass(r, FirParams{});
    CHECK(y.n_channels() == 19);
    CHECK(y.n_samples() == r.n_samples());
  }
  SUBCASE("too short for the kernel") {
    const auto r = testutil::noise_recording(fs, 5, 3);  // 640 < 845 taps
    CHECK_THROWS_WITH_AS(fir_bandpass(r, FirParams{}), doctest::Contains("recording too short for filter order"),
                         DataError);
  }
  SUBCASE("band outside Nyquist") {
    const auto r = testutil::noise_recording(fs, 20, 3);
    FirParams p;
    p.high_hz = 70.0;
    CHECK_THROWS_AS(fir_bandpass(r, p), ConfigError);
  }
}

TEST_CASE("zero-phase filtering agrees with a direct mirrored convolution") {
  const auto x = testutil::white(3000, 7);
  for (std::size_t len : {31u, 845u}) {
    CAPTURE(len);
    const auto h = dsp::windowed_sinc_bandpass(128, 0.5, 40.0, len);
    const auto y = dsp::filter_zero_phase(x, h);
    const auto ref = direct_filter(x, h);
    REQUIRE(y.size() == ref.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y[i] - ref[i]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("zero-phase filter introduces no delay") {
  // A 10 Hz sine passes with its phase intact.
  const auto x = testutil::sine(10.0, 128, 30);
  const auto h = design_fir(FirParams{}, 128);
  const auto y = dsp::filter_zero_phase(x, h);
  CHECK(correlation(std::span(y).subspan(1000, 1500), std::span(x).subspan(1000, 1500)) > 0.999);
}

TEST_CASE("Welch PSD") {
  const double fs = 128;
  SUBCASE("sine 10 Hz peaks at the nearest bin") {
    const auto x = testutil::sine(10.0, fs, 8);
    const auto p = dsp::welch(x, fs);
    const auto k = std::max_element(p.power.begin(), p.power.end()) - p.power.begin();
    CHECK(p.freqs[static_cast<std::size_t>(k)] == doctest::Approx(10.0));
  }
  SUBCASE("frequencies span [0, fs/2]") {
    const auto p = dsp::welch(testutil::white(2048, 1), fs);
    CHECK(p.freqs.front() == 0.0);
    CHECK(p.freqs.back() == doctest::Approx(64.0));
    CHECK(p.df == doctest::Approx(0.5));
  }
  SUBCASE("Parseval: sum(psd) * df within 10% of variance") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto x = testutil::white(4096, seed, 3.0);
      const auto p = dsp::welch(x, fs);
      double s = 0.0;
      for (double v : p.power) s += v * p.df;
      CHECK(std::abs(s / variance(x) - 1.0) < 0.1);
    }
  }
  SUBCASE("white noise is flat over [1, 40] Hz on a 50-realisation average") {
    std::vector<double> avg;
    std::vector<double> freqs;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto p = dsp::welch(testutil::white(2048, seed), fs);
      if (avg.empty()) avg.assign(p.power.size(), 0.0);
      for (std::size_t k = 0; k < p.power.size(); ++k) avg[k] += p.power[k] / 50.0;
      freqs = p.freqs;
    }
    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 0; k < avg.size(); ++k)
      if (freqs[k] >= 1.0 && freqs[k] <= 40.0) {
        lo = std::min(lo, avg[k]);
        hi = std::max(hi, avg[k]);
      }
    CHECK(hi / lo < 10.0);
  }
  SUBCASE("zero signal gives an all-zero PSD") {
    const auto p = dsp::welch(std::vector<double>(1024, 0.0), fs);
    for (double v : p.power) CHECK(v == 0.0);
  }
  SUBCASE("segment length clamps to the signal") {
    const auto p = dsp::welch(testutil::white(200, 1), fs);
    CHECK(p.freqs.size() == 101);
  }
}

TEST_CASE("DFT round trip") {
  const auto x = testutil::white(100, 3);
  const auto back = dsp::idft_real(dsp::dft(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
}
