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

#ifndef BOXBAI_STATISTICS_HPP
#define BOXBAI_STATISTICS_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "boxbai/instance.hpp"

namespace boxbai {

/// Counts N(t, m, k), their box and arm marginals, and per-arm reward totals:
/// the sufficient statistic of a run.
class TallyState {
 public:
  TallyState(std::size_t num_boxes, std::size_t num_arms);

  /// One selection of `box` that pulled `arm` and observed `reward`.
  void record(std::size_t box, std::size_t arm, double reward);
  /// `count` pulls of `arm` through `box` with rewards summing to `reward_total`.
  void record_many(std::size_t box, std::size_t arm, std::uint64_t count, double reward_total);

  [[nodiscard]] std::size_t num_boxes() const noexcept { return n_m_.size(); }
  [[nodiscard]] std::size_t num_arms() const noexcept { return n_k_.size(); }
  [[nodiscard]] std::uint64_t t() const noexcept { return t_; }
  [[nodiscard]] std::uint64_t count(std::size_t box, std::size_t arm) const {
    return n_mk_[box * num_arms() + arm];
  }
  [[nodiscard]] std::uint64_t box_count(std::size_t box) const { return n_m_[box]; }
  [[nodiscard]] std::uint64_t arm_count(std::size_t arm) const { return n_k_[arm]; }
  [[nodiscard]] const std::vector<std::uint64_t>& box_counts() const noexcept { return n_m_; }
  [[nodiscard]] const std::vector<std::uint64_t>& arm_counts() const noexcept { return n_k_; }
  [[nodiscard]] double reward_sum(std::size_t arm) const { return reward_sum_[arm]; }

  [[nodiscard]] bool has_mean(std::size_t arm) const { return n_k_[arm] > 0; }
  /// Empirical mean of `arm`. Throws UndefinedEstimate if never pulled.
  [[nodiscard]] double mean(std::size_t arm) const;
  [[nodiscard]] std::uint64_t min_box_count() const;
  [[nodiscard]] std::uint64_t min_arm_count() const;

 private:
  std::uint64_t t_ = 0;
  std::vector<std::uint64_t> n_mk_;
  std::vector<std::uint64_t> n_m_;
  std::vector<std::uint64_t> n_k_;
  std::vector<double> reward_sum_;
};

/// Plug-in estimates. Rows of q_hat for unselected boxes and means of
/// unpulled arms are left at zero and flagged undefined.
struct Estimates {
  Matrix q_hat;
  std::vector<double> mu_hat;
  std::vector<bool> box_defined;
  std::vector<bool> arm_defined;
};

Estimates estimates(const TallyState& state);

/// Pairwise generalized likelihood ratio statistic for unit-variance
/// Gaussian rewards. Non-negative iff mean(a) >= mean(b); antisymmetric.
/// Throws UndefinedEstimate if either arm is unpulled.
double z_ab(const TallyState& state, std::size_t a, std::size_t b);

struct GlobalStatistic {
  double z = 0.0;
  std::size_t leader = 0;
};

/// Arm with the largest empirical mean, ties broken uniformly with `rng`.
/// Unpulled arms are ignored unless nothing has been pulled yet, in which
/// case every arm counts with mean zero.
std::size_t empirical_leader(const TallyState& state, std::mt19937_64& rng);

/// max_a min_{b != a} z_ab, evaluated at the empirical leader (which attains
/// the outer maximum). Throws UndefinedEstimate while some arm is unpulled.
GlobalStatistic z_global(const TallyState& state, std::mt19937_64& rng);
/// As above with ties broken toward the lowest index.
GlobalStatistic z_global(const TallyState& state);

enum class ThresholdMode {
  /// Constant from the anytime series bound; certified error <= delta.
  Paper,
  /// C = 1. Shorter runs, no error certificate.
  Practical,
};

struct Threshold {
  double c_const = 1.0;
  double rho = 1.0;
  double delta = 0.1;
};

/// Smallest C >= 1 (to bisection precision) with S(C) <= C, where S is the
/// series  sum_t e^{K+1}/K^K (log^2(C t^{1+rho}) log t)^K / t^{1+rho}.
/// Cached per (K, rho); thread safe. Throws NoFiniteC.
double compute_c(std::size_t num_arms, double rho);

/// Rigorous upper bound on S(C): explicit partial sum plus an integral bound
/// on the tail.
double threshold_series_bound(std::size_t num_arms, double rho, double c_const);

Threshold make_threshold(ThresholdMode mode, std::size_t num_arms, double rho, double delta);

/// log(C) + (1 + rho) log(t) + log(1 / delta); t >= 1.
double zeta(const Threshold& threshold, std::uint64_t t);

}  // namespace boxbai

#endif  // BOXBAI_STATISTICS_HPP
