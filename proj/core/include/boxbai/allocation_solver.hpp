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

#ifndef BOXBAI_ALLOCATION_SOLVER_HPP
#define BOXBAI_ALLOCATION_SOLVER_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "boxbai/instance.hpp"

namespace boxbai {

/// A point on the probability simplex over boxes.
class Allocation {
 public:
  /// Throws std::invalid_argument unless entries are >= 0 and sum to 1
  /// within 1e-12.
  explicit Allocation(std::vector<double> weights);

  static Allocation barycenter(std::size_t num_boxes);
  static Allocation vertex(std::size_t num_boxes, std::size_t box);

  [[nodiscard]] std::size_t size() const noexcept { return w_.size(); }
  [[nodiscard]] double operator[](std::size_t m) const { return w_[m]; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return w_; }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<double> w_;
};

/// Box-to-arm matrix, arm means and the arm treated as best. This is what the
/// characteristic-time problem is posed on; it is built either from a
/// validated instance or from running estimates, where the designated best
/// arm may tie with others (the problem is then degenerate and psi == 0).
struct BoxedModel {
  Matrix q;
  std::vector<double> mu;
  std::size_t best_arm = 0;

  static BoxedModel from_instance(const ValidatedInstance& instance);

  [[nodiscard]] std::size_t num_boxes() const noexcept { return q.rows(); }
  [[nodiscard]] std::size_t num_arms() const noexcept { return mu.size(); }
};

/// Arm-pull frequencies induced by selecting boxes according to `w`.
std::vector<double> effective_arm_weights(const Matrix& q, std::span<const double> w);
std::vector<double> effective_arm_weights(const ValidatedInstance& instance, const Allocation& w);

/// Inner infimum of the characteristic-time problem in closed form:
///   min over k != best of  x_k x_b / (x_k + x_b) * (mu_k - mu_b)^2 / 2
/// with x the effective arm weights and x*y/(x+y) := 0 when x + y < 1e-300.
/// Returns +inf when there is no alternative arm.
double psi(const BoxedModel& model, std::span<const double> w);
double psi(const BoxedModel& model, const Allocation& w);
double psi(const ValidatedInstance& instance, const Allocation& w);

struct SolverOptions {
  double tol = 1e-8;  ///< absolute tolerance on psi
  std::size_t ascent_iterations = 150;
  std::size_t max_cut_rounds = 4000;
  /// Compare against a resolution-200 simplex grid (M <= 3 only).
  bool verify_on_grid = true;
};

struct SolverResult {
  double t_star = 0.0;
  Allocation w_star = Allocation::barycenter(1);
  /// |psi(w_star) - grid best| when grid verification ran, otherwise the
  /// certified residual (upper bound minus t_star).
  double certificate_gap = 0.0;
  double upper_bound = 0.0;
  std::size_t grid_resolution = 0;  ///< 0 when no grid was used
  std::size_t iterations = 0;
  bool converged = false;
  /// psi vanishes on the whole simplex (best arm unreachable or tied).
  bool degenerate = false;
};

/// Maximizes psi over the simplex. Deterministic for fixed inputs.
/// Throws NonConvergence if the residual cannot be brought below tol.
SolverResult solve(const BoxedModel& model, const SolverOptions& options = {});
SolverResult solve(const ValidatedInstance& instance, const SolverOptions& options = {});

/// Same as solve() but reports a stalled maximization through
/// `converged == false` instead of throwing.
SolverResult solve_best_effort(const BoxedModel& model, const SolverOptions& options = {});

/// True iff psi(w) >= t_star - eps.
bool wstar_membership(const BoxedModel& model, const Allocation& w, double t_star, double eps);

/// Picks a particular member of the optimizer set: the solver's own point, or
/// the member furthest along the segment from it toward the first or last
/// simplex vertex.
enum class WstarSelection { Solver, TowardFirst, TowardLast };

Allocation select_member(const BoxedModel& model, const SolverResult& result,
                         WstarSelection selection, double tol);

/// Max-coordinate distance. Throws DimensionMismatch.
double dinf_point(std::span<const double> u, std::span<const double> v);

struct SetDistance {
  double distance = 0.0;
  std::size_t resolution = 0;  ///< grid points per unit used to sample the set
};

/// Distance from `u` to the optimizer set, approximated by the members of a
/// regular simplex grid (resolution 200 for M <= 3) together with
/// result.w_star. Zero when `u` is itself a member.
SetDistance dinf_to_set(std::span<const double> u, const BoxedModel& model,
                        const SolverResult& result, double eps);

/// Resolution of the membership grid used by dinf_to_set for M boxes.
std::size_t membership_grid_resolution(std::size_t num_boxes);

/// Calls `visit` on every point of {w : w_m = i_m / resolution} on the simplex.
void for_each_simplex_grid_point(std::size_t num_boxes, std::size_t resolution,
                                 const std::function<void(std::span<const double>)>& visit);

struct GridSearchResult {
  double value = 0.0;
  std::vector<double> w;
};

/// Brute-force maximization of psi: a full simplex grid, a step-1e-3 local
/// grid around its best point, then shrinking local grids down to 1e-12.
/// For M <= 5 the result is polished by nested golden-section search.
/// Shares nothing with solve() beyond psi itself.
GridSearchResult grid_search_characteristic_time(const BoxedModel& model);

/// Characteristic time of a classical bandit (one box per arm) with means
/// `mu`, computed by grid search. Throws TiedBestArm.
double classical_characteristic_time(std::span<const double> mu);

}  // namespace boxbai

#endif  // BOXBAI_ALLOCATION_SOLVER_HPP
