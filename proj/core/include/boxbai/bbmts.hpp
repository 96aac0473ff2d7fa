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

#ifndef BOXBAI_BBMTS_HPP
#define BOXBAI_BBMTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "boxbai/allocation_solver.hpp"
#include "boxbai/instance.hpp"
#include "boxbai/outcome.hpp"
#include "boxbai/statistics.hpp"

namespace boxbai {

/// State of the modified D-tracking rule: a round-robin pointer for forced
/// selections and the running sum of the allocations issued so far.
class TrackerState {
 public:
  explicit TrackerState(std::size_t num_boxes);

  [[nodiscard]] std::size_t num_boxes() const noexcept { return w_cumsum_.size(); }
  [[nodiscard]] std::size_t pointer() const noexcept { return pointer_; }
  [[nodiscard]] const std::vector<double>& w_cumsum() const noexcept { return w_cumsum_; }
  [[nodiscard]] std::uint64_t allocations_issued() const noexcept { return issued_; }

  /// sqrt(t) / sqrt(M).
  [[nodiscard]] double forcing_level(std::uint64_t t) const;

  void add_allocation(const Allocation& w);
  /// Returns the pointer box and advances the pointer cyclically.
  std::size_t take_forced();

 private:
  std::size_t pointer_ = 0;
  std::vector<double> w_cumsum_;
  std::uint64_t issued_ = 0;
};

struct BoxChoice {
  std::size_t box = 0;
  bool forced = false;
};

/// Modified D-tracking. Adds `w` (when given) to the running sum, then
/// forces the round-robin box if some box has N(t, m) < sqrt(t / M) (and at
/// t = 0); otherwise picks the box minimizing N(t, m) - cumsum_m over boxes
/// with positive cumulative weight, lowest index on ties.
BoxChoice next_box(TrackerState& tracker, const TallyState& tally,
                   const std::optional<Allocation>& w);

enum class ResolveMode {
  /// Re-solve the optimizer set at every step.
  Strict,
  /// Every step up to t = 1000, then every ceil(t / 100) steps.
  Thinned,
};

struct BbmtsOptions {
  double delta = 0.1;
  double rho = 1.0;
  ThresholdMode threshold_mode = ThresholdMode::Paper;
  ResolveMode resolve = ResolveMode::Strict;
  WstarSelection selection = WstarSelection::Solver;
  std::uint64_t max_steps = 10'000'000;
  /// With stopping disabled the run goes to max_steps and reports the
  /// leader there instead of raising CapExceeded.
  bool stopping = true;
  std::uint64_t trace_every = 0;  ///< 0 disables tracing
  double solver_tol = 1e-8;
};

/// True-instance quantities used only for diagnostics; the policy never
/// reads them.
struct TrueInstanceReference {
  BoxedModel model;
  SolverResult solution;
  double membership_eps = 1e-9;
};

TrueInstanceReference make_reference(const ValidatedInstance& instance);

/// Read-only view handed to a step observer after each selection.
struct StepView {
  const TallyState& tally;
  const TrackerState& tracker;
  std::size_t leader;  ///< leader at the stopping check preceding the selection
  std::optional<double> z;
  BoxChoice choice;
};

using StepObserver = std::function<void(const StepView&)>;

/// Certainty-equivalent model from running estimates with `leader` as the
/// best arm. Unpulled arms get the smallest observed mean minus one and
/// unselected boxes a uniform arm distribution.
BoxedModel estimated_model(const TallyState& tally, std::size_t leader);

/// One run of the boxed-bandit modified track-and-stop algorithm on unit
/// variance Gaussian rewards. Throws CapExceeded if stopping is enabled and
/// max_steps selections pass without stopping.
RunOutcome run_bbmts(const ValidatedInstance& instance, const BbmtsOptions& options,
                     std::uint64_t seed, const TrueInstanceReference* reference = nullptr,
                     const StepObserver& observer = {});

/// d_inf from the empirical box frequencies to the true optimizer set.
double tracking_distance(const TallyState& tally, const TrueInstanceReference& reference);

}  // namespace boxbai

#endif  // BOXBAI_BBMTS_HPP
