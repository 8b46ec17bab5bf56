// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// Serial reference versus OpenMP kernels. Each benchmark takes the execution
// policy as its argument: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "eegsweep/classify.hpp"
#include "eegsweep/cleaning.hpp"
#include "eegsweep/features.hpp"
#include "eegsweep/selection.hpp"
#include "eegsweep/sweep.hpp"
#include "eegsweep/synth.hpp"

using namespace eegsweep;

namespace {

Exec policy(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

const std::vector<Recording>& cohort() {
  static const auto c = [] {
    set_warning_sink([](std::string_view) {});
    SynthSpec s;
    s.n_subjects_per_class = 10;
    s.duration_s = 30.0;
    s.class_effect.effect_size = 2.0;
    return generate_cohort(s, Exec::Parallel).recordings;
  }();
  return c;
}

const FeatureMatrix& matrix() {
  static const auto m = build_feature_matrix(cohort(), CleaningPipeline{}, {1, 1}, {"P3", "P4", "O1"});
  return m;
}

void BM_ExtractRecording(benchmark::State& st) {
  const auto& r = cohort().front();
  for (auto _ : st) benchmark::DoNotOptimize(extract_recording(r, {}, policy(st)));
}

void BM_GenerateCohort(benchmark::State& st) {
  SynthSpec s;
  s.n_subjects_per_class = 4;
  s.duration_s = 30.0;
  for (auto _ : st) benchmark::DoNotOptimize(generate_cohort(s, policy(st)));
}

void BM_SelectionReport(benchmark::State& st) {
  FeatureMatrix m;
  m.values.resize(121, 1000);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < m.values.size(); ++i) m.values.data()[i] = g(rng);
  for (int j = 0; j < 1000; ++j) m.columns.push_back("X" + std::to_string(j) + ":f");
  for (int i = 0; i < 121; ++i) {
    m.labels.push_back(i < 61 ? 1 : 0);
    m.subject_ids.push_back("S" + std::to_string(i));
  }
  for (auto _ : st) benchmark::DoNotOptimize(selection_report(m, {}, policy(st)));
}

void BM_CrossValidate(benchmark::State& st) {
  CvOptions o;
  o.exec = policy(st);
  const auto grid = default_grid(ClassifierKind::GBT);
  const auto& m = matrix();
  for (auto _ : st) benchmark::DoNotOptimize(cross_validate(m, grid, o));
}

void BM_SweepStage(benchmark::State& st) {
  SweepSpace space;
  space.cleanings = {CleaningKind::Filtered};
  space.chunks = {{1, 1}, {2, 1}};
  space.channels = {"P3", "P4", "O1", "O2"};
  space.classifiers = {ClassifierKind::KNN};
  space.feature_selection = {false};
  const auto specs = enumerate(space);
  SweepOptions o;
  o.exec = policy(st);
  const auto& c = cohort();
  for (auto _ : st) benchmark::DoNotOptimize(run_sweep(c, specs, o));
}

}  // namespace

BENCHMARK(BM_ExtractRecording)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateCohort)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelectionReport)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepStage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
