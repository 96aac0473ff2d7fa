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

#include "boxbai/bbsea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boxbai/errors.hpp"

namespace boxbai {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void require_partition(const ValidatedInstance& instance) {
  if (!instance.is_partition()) {
    throw std::invalid_argument("successive elimination needs a partition instance");
  }
}

}  // namespace

double alpha_delta(std::uint64_t pulls, std::size_t num_arms, double delta) {
  if (pulls < 1) throw std::invalid_argument("confidence radius needs at least one pull");
  require_delta(delta);
  const auto x = static_cast<double>(pulls);
  const double k = static_cast<double>(num_arms);
  return std::sqrt(2.0 * std::log(8.0 * k * x * x / delta) / x);
}

double theory_alpha(double gap, std::size_t num_arms, double delta) {
  if (!(gap > 0.0)) throw NonpositiveGap(gap);
  require_delta(delta);
  const double k = static_cast<double>(num_arms);
  const double g2 = gap * gap;
  return 1.0 + (102.0 / g2) * std::log(64.0 * std::sqrt(8.0 * k / delta) / g2);
}

double theory_beta(double q_mk, double alpha_mk, std::size_t num_arms, double delta) {
  if (!(q_mk > 0.0 && q_mk <= 1.0)) throw std::invalid_argument("q must lie in (0, 1]");
  require_delta(delta);
  const double l = std::log(2.0 * static_cast<double>(num_arms) / delta);
  return (alpha_mk + 2.0 * l + 2.0 * std::sqrt(l * (l + alpha_mk))) / q_mk;
}

TheoryBounds theory_bounds(const ValidatedInstance& instance, double delta) {
  require_partition(instance);
  const auto g = gaps(instance);
  const std::size_t num_arms = instance.num_arms();
  TheoryBounds out;
  out.alpha_mk.resize(num_arms);
  out.beta_mk.resize(num_arms);
  out.beta_m.assign(instance.num_boxes(), 0.0);
  for (std::size_t k = 0; k < num_arms; ++k) {
    const std::size_t m = instance.box_of_arm(k);
    out.alpha_mk[k] = theory_alpha(g.delta[k], num_arms, delta);
    out.beta_mk[k] = theory_beta(instance.q()(m, k), out.alpha_mk[k], num_arms, delta);
    out.beta_m[m] = std::max(out.beta_m[m], out.beta_mk[k]);
  }
  for (double b : out.beta_m) out.upper_bound += b;
  out.lower_bound = partition_lower_bound(instance, delta);
  return out;
}

double partition_lower_bound(const ValidatedInstance& instance, double delta) {
  require_partition(instance);
  require_delta(delta);
  if (!(2.4 * delta < 1.0)) throw std::invalid_argument("lower bound needs delta < 1/2.4");
  const auto g = gaps(instance);
  double total = 0.0;
  for (std::size_t m = 0; m < instance.num_boxes(); ++m) {
    double worst = 0.0;
    for (std::size_t k : instance.arm_sets()[m]) {
      worst = std::max(worst, 1.0 / (instance.q()(m, k) * g.delta[k] * g.delta[k]));
    }
    total += worst;
  }
  return std::log(1.0 / (2.4 * delta)) * total;
}

OrderReport order_check(const ValidatedInstance& instance, double delta) {
  const auto bounds = theory_bounds(instance, delta);
  const auto g = gaps(instance);
  const auto k = static_cast<double>(instance.num_arms());
  OrderReport out;
  out.ratio = bounds.upper_bound / bounds.lower_bound;
  out.normalized_beta.resize(instance.num_arms());
  for (std::size_t a = 0; a < instance.num_arms(); ++a) {
    const double gap = g.delta[a];
    const double q = instance.q()(instance.box_of_arm(a), a);
    out.normalized_beta[a] = bounds.beta_mk[a] * q * gap * gap / std::log(k / (delta * gap));
  }
  return out;
}

std::size_t EliminationState::num_active() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

RunOutcome run_bbsea(const ValidatedInstance& instance, const BbseaOptions& options,
                     std::uint64_t seed, const RoundObserver& observer) {
  require_partition(instance);
  require_delta(options.delta);
  const std::size_t num_arms = instance.num_arms();
  const std::size_t num_boxes = instance.num_boxes();

  EliminationState state;
  state.active.assign(num_arms, true);
  state.active_per_box = instance.arm_sets();
  for (auto& s : state.active_per_box) std::sort(s.begin(), s.end());
  state.active_boxes.assign(num_boxes, true);
  state.pulls.assign(num_arms, 0);
  state.reward_sums.assign(num_arms, 0.0);
  state.means.assign(num_arms, 0.0);
  state.ucb.assign(num_arms, std::numeric_limits<double>::infinity());
  state.lcb.assign(num_arms, -std::numeric_limits<double>::infinity());
  state.bounds_current.assign(num_arms, false);
  state.box_selections.assign(num_boxes, 0);

  TrialStreams streams(seed);

  while (state.num_active() > 1) {
    const std::uint64_t n = ++state.round;

    for (std::size_t m = 0; m < num_boxes; ++m) {
      if (!state.active_boxes[m]) continue;
      auto under_pulled = [&] {
        return std::any_of(state.active_per_box[m].begin(), state.active_per_box[m].end(),
                           [&](std::size_t k) { return state.pulls[k] < n; });
      };
      while (under_pulled()) {
        if (state.t >= options.max_steps) throw CapExceeded(options.max_steps);
        const BoxDraw draw = sample_box(instance, m, streams);
        ++state.t;
        ++state.box_selections[m];
        ++state.pulls[draw.arm];
        state.reward_sums[draw.arm] += draw.reward;
      }
    }

    double best_lcb = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < num_arms; ++k) {
      state.bounds_current[k] = state.active[k];
      if (!state.active[k]) continue;
      state.means[k] = state.reward_sums[k] / static_cast<double>(state.pulls[k]);
      const double radius = alpha_delta(state.pulls[k], num_arms, options.delta);
      state.ucb[k] = state.means[k] + radius;
      state.lcb[k] = state.means[k] - radius;
      best_lcb = std::max(best_lcb, state.lcb[k]);
    }

    for (std::size_t k = 0; k < num_arms; ++k) {
      if (state.active[k] && state.ucb[k] < best_lcb) state.active[k] = false;
    }
    for (std::size_t m = 0; m < num_boxes; ++m) {
      auto& arms = state.active_per_box[m];
      std::erase_if(arms, [&](std::size_t k) { return !state.active[k]; });
      state.active_boxes[m] = !arms.empty();
    }
    if (observer) observer(state);
  }

  RunOutcome outcome;
  outcome.declared_arm = static_cast<std::size_t>(
      std::find(state.active.begin(), state.active.end(), true) - state.active.begin());
  outcome.tau = state.t;
  outcome.correct = outcome.declared_arm == instance.best_arm();
  return outcome;
}

}  // namespace boxbai
