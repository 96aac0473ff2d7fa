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

#ifndef BOXBAI_BBSEA_HPP
#define BOXBAI_BBSEA_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "boxbai/instance.hpp"
#include "boxbai/outcome.hpp"

namespace boxbai {

/// Confidence radius sqrt(2 log(8 K x^2 / delta) / x) after x pulls.
double alpha_delta(std::uint64_t pulls, std::size_t num_arms, double delta);

/// 1 + (102 / gap^2) log(64 sqrt(8K / delta) / gap^2). Throws NonpositiveGap.
double theory_alpha(double gap, std::size_t num_arms, double delta);

/// (1/q) [alpha + 2L + 2 sqrt(L (L + alpha))] with L = log(2K / delta).
double theory_beta(double q_mk, double alpha_mk, std::size_t num_arms, double delta);

/// Per-arm and per-box stopping-time bound terms for a partition instance.
/// Arm-indexed vectors use the instance's global arm index.
struct TheoryBounds {
  std::vector<double> alpha_mk;
  std::vector<double> beta_mk;
  std::vector<double> beta_m;
  double upper_bound = 0.0;  ///< sum of beta_m
  double lower_bound = 0.0;  ///< see partition_lower_bound
};

TheoryBounds theory_bounds(const ValidatedInstance& instance, double delta);

/// log(1 / (2.4 delta)) * sum_m max_{k in A_m} 1 / (q_mk gap_k^2), the
/// expected-stopping-time lower bound for any delta-correct policy.
/// Requires a partition instance and delta < 1 / 2.4.
double partition_lower_bound(const ValidatedInstance& instance, double delta);

struct OrderReport {
  double ratio = 0.0;  ///< upper_bound / lower_bound
  /// beta_mk q_mk gap_k^2 / log(K / (delta gap_k)) per arm.
  std::vector<double> normalized_beta;
};

OrderReport order_check(const ValidatedInstance& instance, double delta);

/// Bookkeeping of a successive-elimination run, indexed by global arm.
struct EliminationState {
  std::uint64_t round = 0;
  std::uint64_t t = 0;
  std::vector<bool> active;
  std::vector<std::vector<std::size_t>> active_per_box;
  std::vector<bool> active_boxes;
  std::vector<std::uint64_t> pulls;
  std::vector<double> reward_sums;
  std::vector<double> means;
  std::vector<double> ucb;
  std::vector<double> lcb;
  /// Arms whose bounds were refreshed in the latest round (active at the
  /// time of the update, possibly eliminated right after).
  std::vector<bool> bounds_current;
  std::vector<std::uint64_t> box_selections;

  [[nodiscard]] std::size_t num_active() const;
};

struct BbseaOptions {
  double delta = 0.1;
  std::uint64_t max_steps = 100'000'000;
};

/// Called once per round, after the elimination step.
using RoundObserver = std::function<void(const EliminationState&)>;

/// Boxed-bandit successive elimination on a partition instance. Throws
/// CapExceeded after max_steps box selections.
RunOutcome run_bbsea(const ValidatedInstance& instance, const BbseaOptions& options,
                     std::uint64_t seed, const RoundObserver& observer = {});

}  // namespace boxbai

#endif  // BOXBAI_BBSEA_HPP
