// Copyright 2026 The mxq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "mxq/catastrophe.hpp"
#include "mxq/inversion.hpp"
#include "mxq/model.hpp"
#include "mxq/resurrect.hpp"
#include "mxq/roots.hpp"
#include "mxq/simulator.hpp"
#include "mxq/stopped.hpp"

namespace {

mxq::QueueModel make(int c, double beta) {
  mxq::RawParameters raw;
  raw.c = c;
  raw.b = {{0, 1.0}, {2, 0.4}, {3, 0.2}, {5, 0.1}};
  raw.h = {{1, 1.0}, {2, 0.5}};
  raw.beta = beta;
  return mxq::QueueModel::validate(raw);
}

void BM_RootULambda(benchmark::State& state) {
  const auto m = make(static_cast<int>(state.range(0)), 0.0);
  double lambda = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mxq::root_u_lambda(m, lambda).value);
    lambda = lambda < 100.0 ? lambda * 1.1 : 0.5;
  }
}
BENCHMARK(BM_RootULambda)->Arg(1)->Arg(4)->Arg(16);

void BM_ResolventRow(benchmark::State& state) {
  const auto m = make(4, 0.0);
  const int J = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mxq::resolvent_row(m, 3, 0.7, J).values.data());
  state.SetComplexityN(J);
}
BENCHMARK(BM_ResolventRow)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Equilibrium(benchmark::State& state) {
  const auto m = make(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(mxq::equilibrium(m).EN);
}
BENCHMARK(BM_Equilibrium)->Arg(1)->Arg(4)->Arg(16);

void BM_CatastropheMoments(benchmark::State& state) {
  const auto m = make(4, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mxq::catastrophe::catastrophe_time_moments(m, 2).variance);
}
BENCHMARK(BM_CatastropheMoments);

void BM_Inversion(benchmark::State& state) {
  const auto m = make(2, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mxq::transition_probability(m, mxq::ProcessVariant::catastrophe, 2, 0, 1.0, static_cast<int>(state.range(0))).value);
}
BENCHMARK(BM_Inversion)->Arg(12)->Arg(16);

void BM_Simulation(benchmark::State& state) {
  const auto m = make(2, 0.5);
  mxq::SimConfig cfg;
  cfg.variant = mxq::ProcessVariant::catastrophe;
  cfg.replications = static_cast<std::uint64_t>(state.range(0));
  cfg.threads = 1;
  mxq::Statistic stat;
  stat.kind = mxq::StatKind::mean_catastrophe_time;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mxq::estimate(m, cfg, stat).point);
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulation)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
