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

// Test-side reference computations. Nothing here calls into the solver; the
// only shared code is the instance type.

#ifndef BOXBAI_TESTS_ORACLES_HPP
#define BOXBAI_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "boxbai/instance.hpp"

namespace boxbai::testing {

inline ValidatedInstance paper_instance() {
  return validate(ProblemInstance{Matrix{{0.3, 0.3, 0.3, 0.1}, {0.3, 0.3, 0.1, 0.3}},
                                  {0.5, 0.4, 0.3, 0.3}});
}

inline ValidatedInstance three_arm_instance() {
  return validate(
      ProblemInstance{Matrix{{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}}, {1.0, 0.5, 0.25}});
}

inline ValidatedInstance partition_instance() {
  ProblemInstance raw{Matrix{{0.5, 0.5, 0.0, 0.0}, {0.0, 0.0, 0.5, 0.5}},
                      {1.0, 0.3, 0.5, 0.0},
                      RewardModel::BernoulliLike,
                      std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}}};
  return validate(std::move(raw));
}

/// Golden-section minimum of a convex function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min({f(a), f(b), fc, fd});
}

/// Inner infimum over alternatives that make arm k beat `best`: both means
/// move to a common value x, costing the arm-weighted squared shifts.
inline double inner_infimum(const Matrix& q, const std::vector<double>& mu, std::size_t best,
                            const std::vector<double>& w) {
  std::vector<double> arm(mu.size(), 0.0);
  for (std::size_t m = 0; m < w.size(); ++m) {
    for (std::size_t k = 0; k < mu.size(); ++k) arm[k] += w[m] * q(m, k);
  }
  double value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (k == best) continue;
    const double lo = std::min(mu[k], mu[best]);
    const double hi = std::max(mu[k], mu[best]);
    auto cost = [&](double x) {
      return arm[best] * (mu[best] - x) * (mu[best] - x) / 2.0 +
             arm[k] * (mu[k] - x) * (mu[k] - x) / 2.0;
    };
    value = std::min(value, golden_min(cost, lo, hi));
  }
  return value;
}

inline double ternary_max(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 120; ++i) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (f(a) < f(b)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return std::max({f(lo), f(hi), f(0.5 * (lo + hi))});
}

/// Maximum of the characteristic-time objective for M <= 3 by nested
/// ternary search on the concave objective.
inline double brute_force_t_star(const Matrix& q, const std::vector<double>& mu,
                                 std::size_t best) {
  const std::size_t boxes = q.rows();
  auto value = [&](const std::vector<double>& w) { return inner_infimum(q, mu, best, w); };
  if (boxes == 1) return value({1.0});
  if (boxes == 2) {
    return ternary_max([&](double a) { return value({a, 1.0 - a}); }, 0.0, 1.0);
  }
  return ternary_max(
      [&](double a) {
        return ternary_max([&](double b) { return value({a, b * (1.0 - a), (1.0 - b) * (1.0 - a)}); },
                           0.0, 1.0);
      },
      0.0, 1.0);
}

inline std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

inline std::vector<double> random_simplex_point(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) s += (x = e(rng));
  for (auto& x : w) x /= s;
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) rest -= w[i];
  w.back() = std::max(0.0, rest);
  return w;
}

/// Random row-stochastic matrix with a random fraction of zero entries.
inline Matrix random_stochastic(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                double zero_probability = 0.0) {
  Matrix q(rows, cols);
  std::bernoulli_distribution zero(zero_probability);
  for (std::size_t m = 0; m < rows; ++m) {
    std::vector<double> row = random_simplex_point(cols, rng);
    for (auto& x : row) {
      if (zero(rng)) x = 0.0;
    }
    double s = 0.0;
    for (double x : row) s += x;
    if (s == 0.0) {
      row.assign(cols, 0.0);
      row[m % cols] = 1.0;
      s = 1.0;
    }
    double rest = 1.0;
    for (std::size_t k = 0; k + 1 < cols; ++k) rest -= (row[k] /= s);
    row.back() = std::max(0.0, rest);
    for (std::size_t k = 0; k < cols; ++k) q(m, k) = row[k];
  }
  return q;
}

}  // namespace boxbai::testing

#endif  // BOXBAI_TESTS_ORACLES_HPP
