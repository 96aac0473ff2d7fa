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

#include "boxbai/bbmts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boxbai/errors.hpp"

namespace boxbai {

namespace {

constexpr std::uint64_t kStrictPrefix = 1000;

}  // namespace

TrackerState::TrackerState(std::size_t num_boxes) : w_cumsum_(num_boxes, 0.0) {
  if (num_boxes == 0) throw std::invalid_argument("tracker needs at least one box");
}

double TrackerState::forcing_level(std::uint64_t t) const {
  return std::sqrt(static_cast<double>(t)) / std::sqrt(static_cast<double>(num_boxes()));
}

void TrackerState::add_allocation(const Allocation& w) {
  if (w.size() != num_boxes()) throw DimensionMismatch(num_boxes(), w.size());
  for (std::size_t m = 0; m < num_boxes(); ++m) w_cumsum_[m] += w[m];
  ++issued_;
}

std::size_t TrackerState::take_forced() {
  const std::size_t box = pointer_;
  pointer_ = (pointer_ + 1) % num_boxes();
  return box;
}

BoxChoice next_box(TrackerState& tracker, const TallyState& tally,
                   const std::optional<Allocation>& w) {
  if (tally.num_boxes() != tracker.num_boxes()) {
    throw DimensionMismatch(tracker.num_boxes(), tally.num_boxes());
  }
  if (w) tracker.add_allocation(*w);

  const std::uint64_t t = tally.t();
  const auto min_count = static_cast<double>(tally.min_box_count());
  if (t == 0 || min_count < tracker.forcing_level(t)) return {tracker.take_forced(), true};

  const auto& cumsum = tracker.w_cumsum();
  std::size_t arg = tracker.num_boxes();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < tracker.num_boxes(); ++m) {
    if (!(cumsum[m] > 0.0)) continue;
    const double deficit = static_cast<double>(tally.box_count(m)) - cumsum[m];
    if (deficit < best) {
      best = deficit;
      arg = m;
    }
  }
  // No allocation issued yet: keep exploring round robin.
  if (arg == tracker.num_boxes()) return {tracker.take_forced(), true};
  return {arg, false};
}

TrueInstanceReference make_reference(const ValidatedInstance& instance) {
  auto model = BoxedModel::from_instance(instance);
  SolverOptions options;
  options.verify_on_grid = false;
  auto solution = solve(model, options);
  return {std::move(model), std::move(solution), 1e-9};
}

BoxedModel estimated_model(const TallyState& tally, std::size_t leader) {
  const auto est = estimates(tally);
  BoxedModel model;
  model.q = est.q_hat;
  model.mu = est.mu_hat;
  model.best_arm = leader;

  const double uniform = 1.0 / static_cast<double>(tally.num_arms());
  for (std::size_t m = 0; m < tally.num_boxes(); ++m) {
    if (est.box_defined[m]) continue;
    for (double& p : model.q.row(m)) p = uniform;
  }

  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tally.num_arms(); ++k) {
    if (est.arm_defined[k]) lowest = std::min(lowest, est.mu_hat[k]);
  }
  if (!std::isfinite(lowest)) lowest = 0.0;
  for (std::size_t k = 0; k < tally.num_arms(); ++k) {
    if (!est.arm_defined[k]) model.mu[k] = lowest - 1.0;
  }
  return model;
}

double tracking_distance(const TallyState& tally, const TrueInstanceReference& reference) {
  if (tally.t() == 0) throw std::invalid_argument("tracking distance needs t > 0");
  std::vector<double> freq(tally.num_boxes());
  const auto t = static_cast<double>(tally.t());
  for (std::size_t m = 0; m < freq.size(); ++m) {
    freq[m] = static_cast<double>(tally.box_count(m)) / t;
  }
  return dinf_to_set(freq, reference.model, reference.solution, reference.membership_eps).distance;
}

RunOutcome run_bbmts(const ValidatedInstance& instance, const BbmtsOptions& options,
                     std::uint64_t seed, const TrueInstanceReference* reference,
                     const StepObserver& observer) {
  const std::size_t num_boxes = instance.num_boxes();
  const std::size_t num_arms = instance.num_arms();
  if (num_arms < 2) throw std::invalid_argument("single-arm instances have no alternative");
  if (instance.reward_model() != RewardModel::GaussianUnitVariance) {
    throw std::invalid_argument("track-and-stop assumes unit-variance Gaussian rewards");
  }
  const Threshold threshold =
      make_threshold(options.threshold_mode, num_arms, options.rho, options.delta);

  SolverOptions solver_options;
  solver_options.tol = options.solver_tol;
  solver_options.verify_on_grid = false;

  TrialStreams streams(seed);
  TallyState tally(num_boxes, num_arms);
  TrackerState tracker(num_boxes);
  Allocation current = Allocation::barycenter(num_boxes);
  std::uint64_t next_solve = 1;
  RunOutcome outcome;

  auto finish = [&](std::size_t declared, bool stopped) {
    outcome.declared_arm = declared;
    outcome.tau = tally.t();
    outcome.correct = declared == instance.best_arm();
    outcome.stopped = stopped;
    if (reference != nullptr && tally.t() > 0) {
      outcome.final_tracking_distance = tracking_distance(tally, *reference);
    }
    return outcome;
  };

  while (true) {
    const std::uint64_t t = tally.t();
    const std::size_t leader = empirical_leader(tally, streams.policy_stream());

    std::optional<double> z;
    if (t >= 1 && tally.min_arm_count() > 0) {
      z = 0.0;
      double smallest = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < num_arms; ++b) {
        if (b != leader) smallest = std::min(smallest, z_ab(tally, leader, b));
      }
      *z = smallest;
      if (options.stopping && *z >= zeta(threshold, t)) return finish(leader, true);
    }

    if (options.trace_every > 0 && t > 0 && t % options.trace_every == 0) {
      TracePoint point;
      point.t = t;
      point.tracking_distance = reference != nullptr ? tracking_distance(tally, *reference)
                                                     : std::numeric_limits<double>::quiet_NaN();
      point.z = z.value_or(std::numeric_limits<double>::quiet_NaN());
      point.zeta = zeta(threshold, t);
      outcome.trace.push_back(point);
    }

    if (t >= options.max_steps) {
      if (options.stopping) throw CapExceeded(options.max_steps);
      return finish(leader, false);
    }

    std::optional<Allocation> w;
    if (t >= 1) {
      const bool due = options.resolve == ResolveMode::Strict || t <= kStrictPrefix ||
                       t >= next_solve;
      if (due) {
        const auto model = estimated_model(tally, leader);
        const auto solution = solve_best_effort(model, solver_options);
        current = select_member(model, solution, options.selection, options.solver_tol);
        next_solve = t + (t + 99) / 100;
      }
      w = current;
    }

    const BoxChoice choice = next_box(tracker, tally, w);
    const BoxDraw draw = sample_box(instance, choice.box, streams);
    tally.record(choice.box, draw.arm, draw.reward);
    if (observer) observer(StepView{tally, tracker, leader, z, choice});
  }
}

}  // namespace boxbai
