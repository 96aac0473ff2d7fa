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

#include "boxbai/allocation_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "boxbai/errors.hpp"
#include "cutting_plane_lp.hpp"

namespace boxbai {

namespace {

constexpr double kSimplexTolerance = 1e-12;
constexpr double kTinyMass = 1e-300;
constexpr double kAscentStep = 0.5;

double harmonic_term(double x, double y) {
  const double s = x + y;
  return s < kTinyMass ? 0.0 : x * y / s;
}

/// Gradient of x*y/(x+y) with respect to (x, y).
std::pair<double, double> harmonic_gradient(double x, double y) {
  const double s = x + y;
  if (s < kTinyMass) return {0.25, 0.25};
  return {(y * y) / (s * s), (x * x) / (s * s)};
}

double half_squared_gap(const BoxedModel& model, std::size_t k) {
  const double gap = model.mu[model.best_arm] - model.mu[k];
  return 0.5 * gap * gap;
}

/// Linear upper model of the k-th pairwise term at w. By homogeneity of the
/// term its value at w equals the dot product of this vector with w.
std::vector<double> term_gradient(const BoxedModel& model, std::span<const double> w,
                                  std::span<const double> arm_weights, std::size_t k) {
  const std::size_t b = model.best_arm;
  const auto [dx, dy] = harmonic_gradient(arm_weights[k], arm_weights[b]);
  const double scale = half_squared_gap(model, k);
  std::vector<double> g(w.size());
  for (std::size_t m = 0; m < w.size(); ++m) {
    g[m] = scale * (dx * model.q(m, k) + dy * model.q(m, b));
  }
  return g;
}

/// Index of the pairwise term attaining psi (lowest index on ties).
std::size_t binding_term(const BoxedModel& model, std::span<const double> arm_weights) {
  const std::size_t b = model.best_arm;
  std::size_t arg = model.num_arms();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < model.num_arms(); ++k) {
    if (k == b) continue;
    const double v = harmonic_term(arm_weights[k], arm_weights[b]) * half_squared_gap(model, k);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  return arg;
}

/// Euclidean projection onto the simplex (sort-based).
std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i];
    const double candidate = (running - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= total;
  return v;
}

std::vector<double> normalized(std::vector<double> w) {
  for (double& x : w) x = std::max(0.0, x);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

void append_cuts(const BoxedModel& model, std::span<const double> w,
                 std::vector<std::vector<double>>& cuts) {
  const auto arm_weights = effective_arm_weights(model.q, w);
  for (std::size_t k = 0; k < model.num_arms(); ++k) {
    if (k == model.best_arm) continue;
    auto g = term_gradient(model, w, arm_weights, k);
    if (std::any_of(g.begin(), g.end(), [](double x) { return x > 0.0; })) {
      cuts.push_back(std::move(g));
    }
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (r > 1e18) return static_cast<std::size_t>(1e18);
  }
  return static_cast<std::size_t>(std::llround(r));
}

std::size_t simplex_grid_size(std::size_t num_boxes, std::size_t resolution) {
  return binomial(resolution + num_boxes - 1, num_boxes - 1);
}

std::size_t largest_resolution(std::size_t num_boxes, std::size_t cap_resolution,
                               std::size_t max_points) {
  std::size_t r = cap_resolution;
  while (r > 1 && simplex_grid_size(num_boxes, r) > max_points) --r;
  return r;
}

constexpr std::size_t kNestedSearchMaxBoxes = 5;
constexpr int kGoldenIterations = 64;

/// Maximum over w_level..w_{M-1} with the earlier coordinates fixed. The
/// partial maximum of a concave function is concave, so golden-section search
/// at every level is exact up to the bracket width.
double nested_golden_search(const BoxedModel& model, std::size_t level, double used,
                            std::vector<double>& w, GridSearchResult& best) {
  const std::size_t last = model.num_boxes() - 1;
  if (level == last) {
    w[last] = std::max(0.0, 1.0 - used);
    const double v = psi(model, std::span<const double>(w));
    if (v > best.value) {
      best.value = v;
      best.w = w;
    }
    return v;
  }
  auto value_at = [&](double x) {
    w[level] = x;
    return nested_golden_search(model, level + 1, used + x, w, best);
  };
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = std::max(0.0, 1.0 - used);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = value_at(c);
  double fd = value_at(d);
  for (int i = 0; i < kGoldenIterations; ++i) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = value_at(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = value_at(c);
    }
  }
  return std::max({fc, fd, value_at(a), value_at(b)});
}

/// Maximizes psi on a local grid of free coordinates w_0..w_{M-2} centred on
/// `center`; w_{M-1} takes the remaining mass.
bool local_grid_step(const BoxedModel& model, std::vector<double>& center, double& center_value,
                     double step, long half_width) {
  const std::size_t free = model.num_boxes() - 1;
  std::vector<long> idx(free, -half_width);
  std::vector<double> w(model.num_boxes());
  std::vector<double> best = center;
  double best_value = center_value;
  long best_edge = 0;
  while (true) {
    double used = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < free; ++i) {
      w[i] = center[i] + step * static_cast<double>(idx[i]);
      if (w[i] < -1e-15) {
        feasible = false;
        break;
      }
      w[i] = std::max(0.0, w[i]);
      used += w[i];
    }
    if (feasible && used <= 1.0 + 1e-15) {
      w[free] = std::max(0.0, 1.0 - used);
      const double v = psi(model, std::span<const double>(w));
      if (v > best_value) {
        best_value = v;
        best = w;
        best_edge = 0;
        for (long i : idx) best_edge = std::max(best_edge, std::labs(i));
      }
    }
    std::size_t d = 0;
    while (d < free && idx[d] == half_width) idx[d++] = -half_width;
    if (d == free) break;
    ++idx[d];
  }
  center = best;
  center_value = best_value;
  return best_edge == half_width;
}

}  // namespace

Allocation::Allocation(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("allocation must have at least one box");
  double total = 0.0;
  for (double x : w_) {
    if (!(x >= 0.0)) throw std::invalid_argument("allocation entries must be non-negative");
    total += x;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("allocation entries must sum to one");
  }
}

Allocation Allocation::barycenter(std::size_t num_boxes) {
  return Allocation(std::vector<double>(num_boxes, 1.0 / static_cast<double>(num_boxes)));
}

Allocation Allocation::vertex(std::size_t num_boxes, std::size_t box) {
  std::vector<double> w(num_boxes, 0.0);
  w.at(box) = 1.0;
  return Allocation(std::move(w));
}

BoxedModel BoxedModel::from_instance(const ValidatedInstance& instance) {
  return {instance.q(), instance.mu(), instance.best_arm()};
}

std::vector<double> effective_arm_weights(const Matrix& q, std::span<const double> w) {
  if (w.size() != q.rows()) throw DimensionMismatch(q.rows(), w.size());
  std::vector<double> out(q.cols(), 0.0);
  for (std::size_t m = 0; m < q.rows(); ++m) {
    if (w[m] == 0.0) continue;
    for (std::size_t k = 0; k < q.cols(); ++k) out[k] += w[m] * q(m, k);
  }
  return out;
}

std::vector<double> effective_arm_weights(const ValidatedInstance& instance, const Allocation& w) {
  return effective_arm_weights(instance.q(), w.weights());
}

double psi(const BoxedModel& model, std::span<const double> w) {
  const auto arm_weights = effective_arm_weights(model.q, w);
  const std::size_t b = model.best_arm;
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < model.num_arms(); ++k) {
    if (k == b) continue;
    out = std::min(out, harmonic_term(arm_weights[k], arm_weights[b]) * half_squared_gap(model, k));
  }
  return out;
}

double psi(const BoxedModel& model, const Allocation& w) { return psi(model, w.weights()); }

double psi(const ValidatedInstance& instance, const Allocation& w) {
  return psi(BoxedModel::from_instance(instance), w.weights());
}

SolverResult solve_best_effort(const BoxedModel& model, const SolverOptions& options) {
  const std::size_t num_boxes = model.num_boxes();
  if (num_boxes == 0) throw std::invalid_argument("model has no boxes");
  if (model.num_arms() < 2) throw std::invalid_argument("characteristic time needs two arms");
  if (model.q.cols() != model.num_arms()) throw DimensionMismatch(model.num_arms(), model.q.cols());
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");

  SolverResult result;
  const Allocation center = Allocation::barycenter(num_boxes);
  const double center_value = psi(model, center);

  if (num_boxes == 1 || center_value == 0.0) {
    // A single box leaves nothing to search; a zero at the barycenter means
    // some pairwise term vanishes for every allocation.
    result.t_star = center_value;
    result.upper_bound = center_value;
    result.w_star = center;
    result.converged = true;
    result.degenerate = center_value == 0.0;
    return result;
  }

  std::vector<double> best(center.weights().begin(), center.weights().end());
  double lower = center_value;
  double upper = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cuts;
  append_cuts(model, best, cuts);

  // Tightens the upper bound with the current cuts and probes the game's
  // optimal point. Returns false when the game cannot be solved.
  auto refine = [&] {
    const auto game = detail::solve_nonnegative_game(cuts, num_boxes);
    if (!game.ok) return false;
    upper = std::min(upper, game.value);
    auto query = normalized(game.w);
    const double v = psi(model, std::span<const double>(query));
    if (v > lower) {
      lower = v;
      best = query;
    }
    append_cuts(model, query, cuts);
    return true;
  };

  // Projected supergradient ascent from the barycenter and every vertex.
  for (std::size_t start = 0; start <= num_boxes; ++start) {
    std::vector<double> w = start == 0 ? best : std::vector<double>(num_boxes, 0.0);
    if (start > 0) w[start - 1] = 1.0;
    std::vector<double> local_best = w;
    double local_value = psi(model, std::span<const double>(w));
    for (std::size_t i = 1; i <= options.ascent_iterations; ++i) {
      const auto arm_weights = effective_arm_weights(model.q, w);
      const std::size_t k = binding_term(model, arm_weights);
      auto g = term_gradient(model, w, arm_weights, k);
      double norm = 0.0;
      for (double x : g) norm = std::max(norm, std::abs(x));
      if (norm == 0.0) break;
      const double eta = kAscentStep / std::sqrt(static_cast<double>(i));
      for (std::size_t m = 0; m < num_boxes; ++m) w[m] += eta * g[m] / norm;
      w = project_to_simplex(std::move(w));
      const double v = psi(model, std::span<const double>(w));
      if (v > local_value) {
        local_value = v;
        local_best = w;
      }
    }
    append_cuts(model, local_best, cuts);
    if (local_value > lower) {
      lower = local_value;
      best = local_best;
    }
    if (refine() && upper - lower <= options.tol) break;
  }

  // Cutting-plane refinement: every pairwise term is concave and
  // 1-homogeneous, so its gradient at any point bounds it from above
  // everywhere. The finite game over the collected bounds yields an upper
  // bound on the optimum and a new query point.
  std::size_t round = 0;
  for (; round < options.max_cut_rounds && upper - lower > options.tol; ++round) {
    const std::size_t before = cuts.size();
    if (!refine() || cuts.size() == before) break;
  }

  result.t_star = lower;
  result.w_star = Allocation(normalized(best));
  result.upper_bound = std::max(upper, lower);
  result.iterations = round;
  result.converged = upper - lower <= options.tol;
  result.certificate_gap = result.upper_bound - lower;

  if (options.verify_on_grid && num_boxes <= 3) {
    double grid_best = 0.0;
    for_each_simplex_grid_point(num_boxes, 200, [&](std::span<const double> w) {
      grid_best = std::max(grid_best, psi(model, w));
    });
    result.certificate_gap = std::abs(result.t_star - grid_best);
    result.grid_resolution = 200;
  }
  return result;
}

SolverResult solve(const BoxedModel& model, const SolverOptions& options) {
  auto result = solve_best_effort(model, options);
  if (!result.converged) {
    throw NonConvergence(result.iterations, result.upper_bound - result.t_star);
  }
  return result;
}

SolverResult solve(const ValidatedInstance& instance, const SolverOptions& options) {
  return solve(BoxedModel::from_instance(instance), options);
}

bool wstar_membership(const BoxedModel& model, const Allocation& w, double t_star, double eps) {
  return psi(model, w) >= t_star - eps;
}

Allocation select_member(const BoxedModel& model, const SolverResult& result,
                         WstarSelection selection, double tol) {
  if (selection == WstarSelection::Solver || result.w_star.size() == 1) return result.w_star;
  const std::size_t num_boxes = result.w_star.size();
  const std::size_t target = selection == WstarSelection::TowardFirst ? 0 : num_boxes - 1;
  const auto from = result.w_star.weights();
  auto point = [&](double alpha) {
    std::vector<double> w(from.begin(), from.end());
    for (std::size_t m = 0; m < num_boxes; ++m) {
      w[m] = (1.0 - alpha) * w[m] + (m == target ? alpha : 0.0);
    }
    return normalized(std::move(w));
  };
  const double floor_value = result.t_star - tol;
  // psi is concave along the segment, so its superlevel set is an interval.
  if (psi(model, std::span<const double>(point(1.0))) >= floor_value) return Allocation(point(1.0));
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (psi(model, std::span<const double>(point(mid))) >= floor_value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Allocation(point(lo));
}

double dinf_point(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionMismatch(u.size(), v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
  return d;
}

std::size_t membership_grid_resolution(std::size_t num_boxes) {
  if (num_boxes <= 3) return 200;
  return largest_resolution(num_boxes, 200, 2'000'000);
}

void for_each_simplex_grid_point(std::size_t num_boxes, std::size_t resolution,
                                 const std::function<void(std::span<const double>)>& visit) {
  if (num_boxes == 0 || resolution == 0) return;
  std::vector<std::size_t> counts(num_boxes, 0);
  std::vector<double> w(num_boxes, 0.0);
  const double inv = 1.0 / static_cast<double>(resolution);
  // Enumerate compositions of `resolution` into num_boxes parts.
  auto recurse = [&](auto&& self, std::size_t index, std::size_t remaining) -> void {
    if (index + 1 == num_boxes) {
      counts[index] = remaining;
      for (std::size_t m = 0; m < num_boxes; ++m) w[m] = static_cast<double>(counts[m]) * inv;
      visit(w);
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[index] = c;
      self(self, index + 1, remaining - c);
    }
  };
  recurse(recurse, 0, resolution);
}

SetDistance dinf_to_set(std::span<const double> u, const BoxedModel& model,
                        const SolverResult& result, double eps) {
  if (u.size() != model.num_boxes()) throw DimensionMismatch(model.num_boxes(), u.size());
  SetDistance out;
  out.resolution = membership_grid_resolution(model.num_boxes());
  out.distance = dinf_point(u, result.w_star.weights());
  const double floor_value = result.t_star - eps;
  const bool on_simplex = std::all_of(u.begin(), u.end(), [](double x) { return x >= 0.0; }) &&
                          std::abs(std::accumulate(u.begin(), u.end(), 0.0) - 1.0) <= 1e-9;
  if (on_simplex && psi(model, u) >= floor_value) {
    out.distance = 0.0;
    return out;
  }
  for_each_simplex_grid_point(model.num_boxes(), out.resolution, [&](std::span<const double> w) {
    const double d = dinf_point(u, w);
    if (d < out.distance && psi(model, w) >= floor_value) out.distance = d;
  });
  return out;
}

GridSearchResult grid_search_characteristic_time(const BoxedModel& model) {
  const std::size_t num_boxes = model.num_boxes();
  if (num_boxes == 0) throw std::invalid_argument("model has no boxes");
  GridSearchResult out;
  if (num_boxes == 1) {
    out.w = {1.0};
    out.value = psi(model, std::span<const double>(out.w));
    return out;
  }

  const std::size_t coarse = largest_resolution(num_boxes, 1000, 200'000);
  out.value = -1.0;
  for_each_simplex_grid_point(num_boxes, coarse, [&](std::span<const double> w) {
    const double v = psi(model, w);
    if (v > out.value) {
      out.value = v;
      out.w.assign(w.begin(), w.end());
    }
  });

  const auto free = static_cast<double>(num_boxes - 1);
  const auto point_budget = static_cast<long>(std::floor((std::pow(5e5, 1.0 / free) - 1.0) / 2.0));
  double step = 1e-3;
  long half_width = static_cast<long>(std::ceil(2.0 / (static_cast<double>(coarse) * step))) + 1;
  half_width = std::max(4L, std::min(half_width, point_budget));
  while (step >= 1e-12) {
    int recentres = 0;
    while (local_grid_step(model, out.w, out.value, step, half_width) && recentres < 50) {
      ++recentres;
    }
    step /= 4.0;
    half_width = std::min(8L, std::max(4L, point_budget));
  }
  if (num_boxes <= kNestedSearchMaxBoxes) {
    std::vector<double> w(num_boxes, 0.0);
    nested_golden_search(model, 0, 0.0, w, out);
  }
  return out;
}

double classical_characteristic_time(std::span<const double> mu) {
  if (mu.size() < 2) throw std::invalid_argument("classical characteristic time needs two arms");
  const auto best = static_cast<std::size_t>(std::max_element(mu.begin(), mu.end()) - mu.begin());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (k != best && mu[k] == mu[best]) throw TiedBestArm(k);
  }
  BoxedModel model{Matrix::identity(mu.size()), std::vector<double>(mu.begin(), mu.end()), best};
  return grid_search_characteristic_time(model).value;
}

}  // namespace boxbai
