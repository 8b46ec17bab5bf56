// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "eegsweep/dsp.hpp"
#include "eegsweep/numeric.hpp"

namespace eegsweep {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBlinkDecay = 3.0;  // per unit of head-coordinate y below the frontal pole
const std::array<std::array<double, 2>, 4> kBandRanges{{{1.0, 3.5}, {4.5, 7.5}, {8.5, 12.0}, {14.0, 28.0}}};
const std::array<const char*, 4> kTemporal{"F7", "F8", "T7", "T8"};

std::string lower(std::string_view s) {
  std::string l(s);
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  return l;
}

double default_duration(ArtifactKind k) {
  return k == ArtifactKind::Blink ? 0.6 : 1.0;
}

std::vector<Eigen::Index> event_onsets(const ArtifactSpec& a, Eigen::Index n, double fs,
                                       Eigen::Index len, std::mt19937_64& rng) {
  std::vector<Eigen::Index> out;
  if (!a.onsets_s.empty()) {
    for (double t : a.onsets_s) {
      const auto s = static_cast<Eigen::Index>(std::lround(t * fs));
      if (s < 0 || s >= n) throw ConfigError("artifact onset outside the recording");
      out.push_back(s);
    }
    return out;
  }
  const double minutes = static_cast<double>(n) / fs / 60.0;
  const auto count = static_cast<Eigen::Index>(std::lround(a.rate_per_min * minutes));
  if (count <= 0) return out;
  // One event per equal slot keeps events disjoint.
  const Eigen::Index slot = n / count;
  if (slot <= len) throw ConfigError("artifact rate too high for its duration");
  std::uniform_int_distribution<Eigen::Index> jitter(0, slot - len - 1);
  for (Eigen::Index i = 0; i < count; ++i) out.push_back(i * slot + jitter(rng));
  return out;
}

std::size_t pick_channel(const Recording& r, const ArtifactSpec& a, std::mt19937_64& rng,
                         bool temporal_only) {
  if (a.channel) {
    auto idx = r.channel_index(*a.channel);
    if (!idx) throw ConfigError("unknown channel label '" + *a.channel + "'");
    return static_cast<std::size_t>(*idx);
  }
  if (temporal_only) {
    std::uniform_int_distribution<std::size_t> pick(0, kTemporal.size() - 1);
    auto idx = r.channel_index(kTemporal[pick(rng)]);
    if (idx) return static_cast<std::size_t>(*idx);
  }
  std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(r.n_channels()) - 1);
  return pick(rng);
}

}  // namespace

std::string to_string(FeatureAxis a) {
  switch (a) {
    case FeatureAxis::ThetaPower: return "theta_power";
    case FeatureAxis::AlphaPower: return "alpha_power";
    case FeatureAxis::Kurtosis: return "kurtosis";
  }
  return "?";
}

std::string to_string(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Blink: return "blink";
    case ArtifactKind::MuscleBurst: return "muscle_burst";
    case ArtifactKind::Line50Hz: return "line_50hz";
    case ArtifactKind::BadChannel: return "bad_channel";
  }
  return "?";
}

FeatureAxis feature_axis_from_string(std::string_view s) {
  const auto l = lower(s);
  if (l == "theta_power") return FeatureAxis::ThetaPower;
  if (l == "alpha_power") return FeatureAxis::AlphaPower;
  if (l == "kurtosis") return FeatureAxis::Kurtosis;
  throw ConfigError("unknown feature axis '" + std::string(s) + "'");
}

ArtifactKind artifact_kind_from_string(std::string_view s) {
  const auto l = lower(s);
  if (l == "blink") return ArtifactKind::Blink;
  if (l == "muscle_burst" || l == "muscle") return ArtifactKind::MuscleBurst;
  if (l == "line_50hz" || l == "line") return ArtifactKind::Line50Hz;
  if (l == "bad_channel") return ArtifactKind::BadChannel;
  throw ConfigError("unknown artifact kind '" + std::string(s) + "'");
}

void validate(const SynthSpec& s) {
  if (s.n_subjects_per_class < 1) throw ConfigError("n_subjects_per_class must be >= 1");
  if (!(s.duration_s >= 2.0)) throw ConfigError("duration_s must be >= 2");
  if (!(s.sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be positive");
  if (!(s.class_effect.effect_size > 0.0)) throw ConfigError("effect_size must be positive");
  Montage::standard_1020().require_index(s.class_effect.target_channel);
  if (!(s.background.pink_amplitude > 0.0)) throw ConfigError("pink amplitude must be positive");
  for (double a : s.background.band_amplitudes)
    if (a < 0.0) throw ConfigError("band amplitudes must be non-negative");
  for (const auto& a : s.artifacts) {
    if (!(a.amplitude > 0.0)) throw ConfigError("artifact amplitude must be positive");
    if (a.channel) Montage::standard_1020().require_index(*a.channel);
  }
}

std::vector<double> pink_noise(std::size_t n, double fs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t m = dsp::next_pow2(std::max<std::size_t>(n, 2));
  std::vector<std::complex<double>> spec(m, 0.0);
  for (std::size_t k = 1; k <= m / 2; ++k) {
    const double f = std::max(static_cast<double>(k) * fs / static_cast<double>(m), 0.5);
    const double amp = 1.0 / std::sqrt(f);
    std::complex<double> z(normal(rng), normal(rng));
    if (k == m / 2) z = z.real();
    spec[k] = amp * z;
    if (k != m / 2) spec[m - k] = std::conj(spec[k]);
  }
  auto x = dsp::idft_real(spec);
  x.resize(n);
  const double mu = mean(x);
  for (double& v : x) v -= mu;
  const double sd = std::sqrt(variance(x));
  if (sd > 0.0)
    for (double& v : x) v /= sd;
  return x;
}

Recording generate_background(const SynthSpec& spec, std::size_t subject_index, Label label) {
  const Montage& montage = Montage::standard_1020();
  const std::size_t nc = montage.size();
  const auto n = static_cast<Eigen::Index>(std::lround(spec.duration_s * spec.sample_rate_hz));
  const double fs = spec.sample_rate_hz;
  const std::uint64_t seed = spec.rng_seed + subject_index;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& bg = spec.background;
  const std::size_t target = montage.require_index(spec.class_effect.target_channel);
  const bool affected = label == Label::ADHD;

  SignalMatrix sources(static_cast<Eigen::Index>(nc), n);
  for (std::size_t s = 0; s < nc; ++s) {
    std::vector<double> pink = pink_noise(static_cast<std::size_t>(n), fs, rng());
    if (affected && s == target && spec.class_effect.axis == FeatureAxis::Kurtosis) {
      // Heavy-tail scale mixture on 0.5 s blocks, variance renormalised.
      const auto block = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(fs / 2.0));
      double env = 1.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        if (t % block == 0) env = unit(rng) < 0.15 ? spec.class_effect.effect_size : 1.0;
        pink[static_cast<std::size_t>(t)] *= env;
      }
      const double sd = std::sqrt(variance(pink));
      if (sd > 0.0)
        for (double& v : pink) v /= sd;
    }
    for (Eigen::Index t = 0; t < n; ++t)
      sources(static_cast<Eigen::Index>(s), t) = bg.pink_amplitude * pink[static_cast<std::size_t>(t)];
    for (std::size_t b = 0; b < 4; ++b) {
      double amp = bg.band_amplitudes[b] * std::exp(bg.subject_jitter * normal(rng));
      const double f = kBandRanges[b][0] + (kBandRanges[b][1] - kBandRanges[b][0]) * unit(rng);
      const double phase = 2.0 * kPi * unit(rng);
      if (affected && s == target) {
        if ((b == 1 && spec.class_effect.axis == FeatureAxis::ThetaPower) ||
            (b == 2 && spec.class_effect.axis == FeatureAxis::AlphaPower))
          amp *= spec.class_effect.effect_size;
      }
      for (Eigen::Index t = 0; t < n; ++t)
        sources(static_cast<Eigen::Index>(s), t) +=
            amp * std::sin(2.0 * kPi * f * static_cast<double>(t) / fs + phase);
    }
  }

  Eigen::MatrixXd topo(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(nc));
  const double two_s2 = 2.0 * bg.spatial_sigma * bg.spatial_sigma;
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t s = 0; s < nc; ++s) {
      const double dx = montage.coords()[c].x - montage.coords()[s].x;
      const double dy = montage.coords()[c].y - montage.coords()[s].y;
      topo(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(s)) = std::exp(-(dx * dx + dy * dy) / two_s2);
    }

  Recording r;
  r.subject_id = (affected ? "A" : "T") + std::string(4 - std::min<std::size_t>(4, std::to_string(subject_index).size()), '0') +
                 std::to_string(subject_index);
  r.label = label;
  r.sample_rate_hz = fs;
  r.channel_names = montage.names();
  r.samples = topo * sources;
  const double noise_sd = bg.sensor_noise * bg.pink_amplitude;
  for (Eigen::Index c = 0; c < r.samples.rows(); ++c)
    for (Eigen::Index t = 0; t < n; ++t) r.samples(c, t) += noise_sd * normal(rng);
  return r;
}

Injection inject_artifact(const Recording& r, const ArtifactSpec& a, std::uint64_t rng_seed) {
  if (!(a.amplitude > 0.0)) throw ConfigError("artifact amplitude must be positive");
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double fs = r.sample_rate_hz;
  const Eigen::Index n = r.n_samples();
  const Eigen::Index nc = r.n_channels();
  Injection out;
  out.contribution = SignalMatrix::Zero(nc, n);
  out.mask.assign(static_cast<std::size_t>(n), 0);
  const double dur = a.duration_s > 0.0 ? a.duration_s : default_duration(a.kind);
  const auto len = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::lround(dur * fs)));

  switch (a.kind) {
    case ArtifactKind::Blink: {
      const Montage& montage = Montage::standard_1020();
      const double y_pole = montage.coord("Fp1").y;
      std::vector<double> gain(static_cast<std::size_t>(nc), 0.0);
      for (Eigen::Index c = 0; c < nc; ++c) {
        auto idx = montage.index_of(r.channel_names[static_cast<std::size_t>(c)]);
        const double y = idx ? montage.coords()[*idx].y : 0.0;
        gain[static_cast<std::size_t>(c)] = std::exp(-kBlinkDecay * std::max(0.0, y_pole - y));
      }
      // Biphasic Hann-tapered cycle, unit peak.
      std::vector<double> shape(static_cast<std::size_t>(len));
      double peak = 0.0;
      for (Eigen::Index i = 0; i < len; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(len);
        const double v = std::sin(2.0 * kPi * u) * 0.5 * (1.0 - std::cos(2.0 * kPi * u));
        shape[static_cast<std::size_t>(i)] = v;
        peak = std::max(peak, std::abs(v));
      }
      for (auto s : event_onsets(a, n, fs, len, rng)) {
        const Eigen::Index e = std::min(n, s + len);
        for (Eigen::Index t = s; t < e; ++t) {
          const double v = a.amplitude * shape[static_cast<std::size_t>(t - s)] / peak;
          for (Eigen::Index c = 0; c < nc; ++c) out.contribution(c, t) += gain[static_cast<std::size_t>(c)] * v;
          out.mask[static_cast<std::size_t>(t)] = 1;
        }
        out.events.push_back({a.kind, std::nullopt, s, e});
      }
      break;
    }
    case ArtifactKind::MuscleBurst: {
      const std::size_t taps = dsp::hamming_kernel_length(2.0, fs);
      const auto kernel = dsp::windowed_sinc_bandpass(fs, 20.0, std::min(45.0, fs / 2.0), taps);
      for (auto s : event_onsets(a, n, fs, len, rng)) {
        const std::size_t ch = pick_channel(r, a, rng, true);
        std::vector<double> white(static_cast<std::size_t>(len) + 2 * taps);
        for (double& v : white) v = normal(rng);
        auto band = dsp::filter_zero_phase(white, kernel);
        std::vector<double> burst(band.begin() + static_cast<std::ptrdiff_t>(taps),
                                  band.begin() + static_cast<std::ptrdiff_t>(taps) + len);
        const double br = rms(burst);
        const Eigen::Index e = std::min(n, s + len);
        const double taper_len = 0.1 * static_cast<double>(len);
        for (Eigen::Index t = s; t < e; ++t) {
          const double i = static_cast<double>(t - s);
          double taper = 1.0;
          if (i < taper_len) taper = 0.5 * (1.0 - std::cos(kPi * i / taper_len));
          const double j = static_cast<double>(len - 1) - i;
          if (j < taper_len) taper = 0.5 * (1.0 - std::cos(kPi * j / taper_len));
          out.contribution(static_cast<Eigen::Index>(ch), t) +=
              a.amplitude * taper * burst[static_cast<std::size_t>(t - s)] / br;
          out.mask[static_cast<std::size_t>(t)] = 1;
        }
        out.events.push_back({a.kind, ch, s, e});
      }
      break;
    }
    case ArtifactKind::Line50Hz: {
      if (50.0 >= fs / 2.0) throw ConfigError("line_50hz needs a sample rate above 100 Hz");
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double phase = 2.0 * kPi * unit(rng);
      for (Eigen::Index t = 0; t < n; ++t) {
        const double v = a.amplitude * std::sin(2.0 * kPi * 50.0 * static_cast<double>(t) / fs + phase);
        for (Eigen::Index c = 0; c < nc; ++c) out.contribution(c, t) = v;
      }
      out.events.push_back({a.kind, std::nullopt, 0, n});
      break;
    }
    case ArtifactKind::BadChannel: {
      const std::size_t ch = pick_channel(r, a, rng, false);
      const auto c = static_cast<Eigen::Index>(ch);
      for (Eigen::Index t = 0; t < n; ++t)
        out.contribution(c, t) = a.amplitude * normal(rng) - r.samples(c, t);
      out.events.push_back({a.kind, ch, 0, n});
      break;
    }
  }
  out.recording = r.with_samples(r.samples + out.contribution);
  return out;
}

SynthCohort generate_cohort(const SynthSpec& spec, Exec exec) {
  validate(spec);
  const std::size_t total = 2 * spec.n_subjects_per_class;
  SynthCohort out;
  out.recordings.resize(total);
  out.truth.clean.resize(total);
  out.truth.events.resize(total);
  out.truth.masks.resize(total);

#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(total); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Label label = i < spec.n_subjects_per_class ? Label::ADHD : Label::TD;
    Recording r = generate_background(spec, i, label);
    out.truth.clean[i] = r.samples;
    double bg_rms = 0.0;
    for (Eigen::Index c = 0; c < r.n_channels(); ++c) bg_rms += rms(r.channel(c));
    bg_rms /= static_cast<double>(r.n_channels());
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(r.n_samples()), 0);
    for (std::size_t k = 0; k < spec.artifacts.size(); ++k) {
      ArtifactSpec a = spec.artifacts[k];
      a.amplitude *= bg_rms;
      const std::uint64_t aseed = (spec.rng_seed + i) * 1000003ull + 7919ull * (k + 1);
      Injection inj = inject_artifact(r, a, aseed);
      for (std::size_t t = 0; t < mask.size(); ++t) mask[t] |= inj.mask[t];
      for (auto& e : inj.events) out.truth.events[i].push_back(e);
      r = std::move(inj.recording);
    }
    out.truth.masks[i] = std::move(mask);
    out.recordings[i] = std::move(r);
  }
  return out;
}

json to_json(const SynthSpec& s) {
  json arts = json::array();
  for (const auto& a : s.artifacts) {
    json j{{"kind", to_string(a.kind)}, {"amplitude", a.amplitude}, {"rate_per_min", a.rate_per_min},
           {"duration_s", a.duration_s}, {"onsets_s", a.onsets_s}};
    if (a.channel) j["channel"] = *a.channel;
    arts.push_back(j);
  }
  return {{"n_subjects_per_class", s.n_subjects_per_class},
          {"duration_s", s.duration_s},
          {"sample_rate_hz", s.sample_rate_hz},
          {"background",
           {{"pink_amplitude", s.background.pink_amplitude},
            {"band_amplitudes", s.background.band_amplitudes},
            {"spatial_sigma", s.background.spatial_sigma},
            {"sensor_noise", s.background.sensor_noise},
            {"subject_jitter", s.background.subject_jitter}}},
          {"class_effect",
           {{"target_channel", s.class_effect.target_channel},
            {"feature_axis", to_string(s.class_effect.axis)},
            {"effect_size", s.class_effect.effect_size}}},
          {"artifacts", arts},
          {"rng_seed", s.rng_seed}};
}

SynthSpec synth_spec_from_json(const json& j) {
  SynthSpec s;
  try {
    s.n_subjects_per_class = j.value("n_subjects_per_class", s.n_subjects_per_class);
    s.duration_s = j.value("duration_s", s.duration_s);
    s.sample_rate_hz = j.value("sample_rate_hz", s.sample_rate_hz);
    s.rng_seed = j.value("rng_seed", s.rng_seed);
    if (j.contains("background")) {
      const auto& b = j["background"];
      s.background.pink_amplitude = b.value("pink_amplitude", s.background.pink_amplitude);
      if (b.contains("band_amplitudes"))
        s.background.band_amplitudes = b["band_amplitudes"].get<std::array<double, 4>>();
      s.background.spatial_sigma = b.value("spatial_sigma", s.background.spatial_sigma);
      s.background.sensor_noise = b.value("sensor_noise", s.background.sensor_noise);
      s.background.subject_jitter = b.value("subject_jitter", s.background.subject_jitter);
    }
    if (j.contains("class_effect")) {
      const auto& c = j["class_effect"];
      s.class_effect.target_channel = c.value("target_channel", s.class_effect.target_channel);
      if (c.contains("feature_axis"))
        s.class_effect.axis = feature_axis_from_string(c["feature_axis"].get<std::string>());
      s.class_effect.effect_size = c.value("effect_size", s.class_effect.effect_size);
    }
    if (j.contains("artifacts")) {
      for (const auto& a : j["artifacts"]) {
        ArtifactSpec x;
        x.kind = artifact_kind_from_string(a.at("kind").get<std::string>());
        x.amplitude = a.value("amplitude", x.amplitude);
        x.rate_per_min = a.value("rate_per_min", x.rate_per_min);
        x.duration_s = a.value("duration_s", x.duration_s);
        if (a.contains("onsets_s")) x.onsets_s = a["onsets_s"].get<std::vector<double>>();
        if (a.contains("channel")) x.channel = a["channel"].get<std::string>();
        s.artifacts.push_back(std::move(x));
      }
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("malformed synth spec: ") + ex.what());
  }
  validate(s);
  return s;
}

json ground_truth_json(const SynthSpec& spec, const SynthCohort& cohort) {
  json subjects = json::array();
  const auto& names = Montage::standard_1020().names();
  const double fs = spec.sample_rate_hz;
  for (std::size_t i = 0; i < cohort.recordings.size(); ++i) {
    json events = json::array();
    for (const auto& e : cohort.truth.events[i]) {
      json je{{"kind", to_string(e.kind)},
              {"start_s", static_cast<double>(e.start) / fs},
              {"end_s", static_cast<double>(e.end) / fs},
              {"start_sample", e.start},
              {"end_sample", e.end}};
      je["channel"] = e.channel ? json(names[*e.channel]) : json("all");
      events.push_back(je);
    }
    subjects.push_back({{"id", cohort.recordings[i].subject_id},
                        {"label", to_int(cohort.recordings[i].label)},
                        {"events", events}});
  }
  return {{"spec", to_json(spec)},
          {"class_effect",
           {{"target_channel", spec.class_effect.target_channel},
            {"feature_axis", to_string(spec.class_effect.axis)},
            {"effect_size", spec.class_effect.effect_size},
            {"affected_label", 1}}},
          {"subjects", subjects}};
}

}  // namespace eegsweep
