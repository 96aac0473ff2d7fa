// Copyright 2026 The boxbai Authors
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

#include <algorithm>
#include <random>
#include <vector>

#include "boxbai/allocation_solver.hpp"
#include "boxbai/bbmts.hpp"
#include "boxbai/bbsea.hpp"
#include "boxbai/statistics.hpp"

namespace {

using namespace boxbai;

BoxedModel random_model(std::size_t boxes, std::size_t arms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  BoxedModel model;
  model.q = Matrix(boxes, arms);
  for (std::size_t m = 0; m < boxes; ++m) {
    double s = 0.0;
    for (std::size_t k = 0; k < arms; ++k) s += (model.q(m, k) = e(rng));
    for (std::size_t k = 0; k < arms; ++k) model.q(m, k) /= s;
  }
  model.mu.resize(arms);
  for (auto& x : model.mu) x = n(rng);
  model.best_arm = static_cast<std::size_t>(
      std::max_element(model.mu.begin(), model.mu.end()) - model.mu.begin());
  return model;
}

void BM_Psi(benchmark::State& state) {
  const auto model = random_model(static_cast<std::size_t>(state.range(0)), 8, 1);
  const auto w = Allocation::barycenter(model.num_boxes());
  for (auto _ : state) benchmark::DoNotOptimize(psi(model, w));
}
BENCHMARK(BM_Psi)->Arg(2)->Arg(8)->Arg(32);

void BM_Solve(benchmark::State& state) {
  const auto model = random_model(static_cast<std::size_t>(state.range(0)), 4, 2);
  SolverOptions options;
  options.verify_on_grid = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_best_effort(model, options).t_star);
}
BENCHMARK(BM_Solve)->Arg(2)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_ZGlobal(benchmark::State& state) {
  const auto arms = static_cast<std::size_t>(state.range(0));
  TallyState tally(1, arms);
  for (std::size_t k = 0; k < arms; ++k) tally.record_many(0, k, 10 + k, 0.1 * static_cast<double>(k));
  for (auto _ : state) benchmark::DoNotOptimize(z_global(tally).z);
}
BENCHMARK(BM_ZGlobal)->Arg(4)->Arg(64);

void BM_ThresholdSeriesBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(threshold_series_bound(3, 1.0, 1e10));
}
BENCHMARK(BM_ThresholdSeriesBound)->Unit(benchmark::kMillisecond);

void BM_BbmtsRun(benchmark::State& state) {
  const auto inst = validate(ProblemInstance{Matrix{{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}},
                                             {1.0, 0.5, 0.25},
                                             RewardModel::GaussianUnitVariance,
                                             std::nullopt});
  BbmtsOptions options;
  options.threshold_mode = ThresholdMode::Practical;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_bbmts(inst, options, seed++).tau);
}
BENCHMARK(BM_BbmtsRun)->Unit(benchmark::kMillisecond);

void BM_BbseaRun(benchmark::State& state) {
  ProblemInstance raw{Matrix{{0.5, 0.5, 0.0, 0.0}, {0.0, 0.0, 0.5, 0.5}},
                      {1.0, 0.3, 0.5, 0.0},
                      RewardModel::BernoulliLike,
                      std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}}};
  const auto inst = validate(std::move(raw));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_bbsea(inst, BbseaOptions{}, seed++).tau);
}
BENCHMARK(BM_BbseaRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
