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

#include "boxbai/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "boxbai/errors.hpp"

namespace boxbai {

TallyState::TallyState(std::size_t num_boxes, std::size_t num_arms)
    : n_mk_(num_boxes * num_arms, 0),
      n_m_(num_boxes, 0),
      n_k_(num_arms, 0),
      reward_sum_(num_arms, 0.0) {}

void TallyState::record(std::size_t box, std::size_t arm, double reward) {
  record_many(box, arm, 1, reward);
}

void TallyState::record_many(std::size_t box, std::size_t arm, std::uint64_t count,
                             double reward_total) {
  if (box >= num_boxes() || arm >= num_arms()) throw std::out_of_range("tally index out of range");
  n_mk_[box * num_arms() + arm] += count;
  n_m_[box] += count;
  n_k_[arm] += count;
  reward_sum_[arm] += reward_total;
  t_ += count;
}

double TallyState::mean(std::size_t arm) const {
  if (n_k_.at(arm) == 0) throw UndefinedEstimate(arm);
  return reward_sum_[arm] / static_cast<double>(n_k_[arm]);
}

std::uint64_t TallyState::min_box_count() const {
  return *std::min_element(n_m_.begin(), n_m_.end());
}

std::uint64_t TallyState::min_arm_count() const {
  return *std::min_element(n_k_.begin(), n_k_.end());
}

Estimates estimates(const TallyState& state) {
  Estimates out;
  out.q_hat = Matrix(state.num_boxes(), state.num_arms());
  out.mu_hat.assign(state.num_arms(), 0.0);
  out.box_defined.assign(state.num_boxes(), false);
  out.arm_defined.assign(state.num_arms(), false);
  for (std::size_t m = 0; m < state.num_boxes(); ++m) {
    const auto n = state.box_count(m);
    if (n == 0) continue;
    out.box_defined[m] = true;
    for (std::size_t k = 0; k < state.num_arms(); ++k) {
      out.q_hat(m, k) = static_cast<double>(state.count(m, k)) / static_cast<double>(n);
    }
  }
  for (std::size_t k = 0; k < state.num_arms(); ++k) {
    if (!state.has_mean(k)) continue;
    out.arm_defined[k] = true;
    out.mu_hat[k] = state.mean(k);
  }
  return out;
}

double z_ab(const TallyState& state, std::size_t a, std::size_t b) {
  const double mean_a = state.mean(a);
  const double mean_b = state.mean(b);
  if (mean_a == mean_b) return 0.0;
  if (mean_a < mean_b) return -z_ab(state, b, a);
  const auto n_a = static_cast<double>(state.arm_count(a));
  const auto n_b = static_cast<double>(state.arm_count(b));
  const double pooled = n_a / (n_a + n_b) * mean_a + n_b / (n_a + n_b) * mean_b;
  const double da = mean_a - pooled;
  const double db = mean_b - pooled;
  return n_a * da * da / 2.0 + n_b * db * db / 2.0;
}

namespace {

template <typename TieBreak>
std::size_t leader_with(const TallyState& state, TieBreak&& pick) {
  const bool nothing_pulled = state.t() == 0;
  std::vector<std::size_t> ties;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < state.num_arms(); ++k) {
    double value = 0.0;
    if (!nothing_pulled) {
      if (!state.has_mean(k)) continue;
      value = state.mean(k);
    }
    if (value > best) {
      best = value;
      ties.assign(1, k);
    } else if (value == best) {
      ties.push_back(k);
    }
  }
  return ties.size() == 1 ? ties.front() : pick(ties);
}

GlobalStatistic evaluate_at(const TallyState& state, std::size_t leader) {
  if (state.num_arms() < 2) throw std::invalid_argument("global statistic needs two arms");
  for (std::size_t k = 0; k < state.num_arms(); ++k) {
    if (!state.has_mean(k)) throw UndefinedEstimate(k);
  }
  GlobalStatistic out{std::numeric_limits<double>::infinity(), leader};
  for (std::size_t b = 0; b < state.num_arms(); ++b) {
    if (b != leader) out.z = std::min(out.z, z_ab(state, leader, b));
  }
  return out;
}

}  // namespace

std::size_t empirical_leader(const TallyState& state, std::mt19937_64& rng) {
  return leader_with(state, [&](const std::vector<std::size_t>& ties) {
    std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
    return ties[pick(rng)];
  });
}

GlobalStatistic z_global(const TallyState& state, std::mt19937_64& rng) {
  return evaluate_at(state, empirical_leader(state, rng));
}

GlobalStatistic z_global(const TallyState& state) {
  const std::size_t leader =
      leader_with(state, [](const std::vector<std::size_t>& ties) { return ties.front(); });
  return evaluate_at(state, leader);
}

namespace {

constexpr std::uint64_t kSeriesTerms = 1U << 17;
constexpr double kMaxLogC = 690.0;  // log(1e300)

struct SeriesShape {
  long double log_prefactor;  // log(e^{K+1} / K^K)
  long double k;
  long double b;  // 1 + rho
  long double rho;
};

SeriesShape shape_for(std::size_t num_arms, double rho) {
  const auto k = static_cast<long double>(num_arms);
  return {k + 1.0L - k * std::log(k), k, 1.0L + rho, static_cast<long double>(rho)};
}

/// Summand of S in log-space as a function of u = log t (u > 0).
long double log_summand(const SeriesShape& s, long double log_c, long double u) {
  return s.log_prefactor + s.k * (2.0L * std::log(log_c + s.b * u) + std::log(u)) - s.b * u;
}

/// d/du of the log summand; negative past the mode.
long double log_summand_slope(const SeriesShape& s, long double log_c, long double u) {
  return 2.0L * s.k * s.b / (log_c + s.b * u) + s.k / u - s.b;
}

/// Integral of the summand over t in [e^u0, inf). In u-space the integrand
/// is p(u) e^{-rho u} with p(u) = A (log_c + b u)^{2K} u^K, integrated in
/// closed form by repeated integration by parts.
long double tail_integral(const SeriesShape& s, std::size_t num_arms, long double log_c,
                          long double u0) {
  const std::size_t degree = 3 * num_arms;
  std::vector<long double> coeff(degree + 1, 0.0L);
  long double binom = 1.0L;
  const std::size_t n = 2 * num_arms;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) binom = binom * static_cast<long double>(n - i + 1) / static_cast<long double>(i);
    coeff[i + num_arms] = binom * std::pow(log_c, static_cast<long double>(n - i)) *
                          std::pow(s.b, static_cast<long double>(i));
  }
  long double total = 0.0L;
  long double rho_power = s.rho;
  for (std::size_t j = 0; j <= degree; ++j) {
    long double derivative = 0.0L;
    for (std::size_t i = degree + 1; i-- > 0;) derivative = derivative * u0 + coeff[i];
    total += derivative / rho_power;
    // Differentiate in place.
    for (std::size_t i = 0; i + 1 <= degree; ++i) {
      coeff[i] = coeff[i + 1] * static_cast<long double>(i + 1);
    }
    coeff[degree - j] = 0.0L;
    rho_power *= s.rho;
  }
  return std::exp(s.log_prefactor - s.rho * u0) * total;
}

double series_bound(std::size_t num_arms, double rho, long double log_c) {
  const SeriesShape s = shape_for(num_arms, rho);
  long double sum = 0.0L;
  long double compensation = 0.0L;
  std::uint64_t t = 2;
  for (; t <= kSeriesTerms; ++t) {
    const long double u = std::log(static_cast<long double>(t));
    const long double term = std::exp(log_summand(s, log_c, u));
    // Neumaier summation.
    const long double next = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      compensation += (sum - next) + term;
    } else {
      compensation += (term - next) + sum;
    }
    sum = next;
    if (term < 1e-16L * (sum + compensation) && log_summand_slope(s, log_c, u) < 0.0L) {
      ++t;
      break;
    }
  }
  // Remaining terms t' >= t: integral from t-1 plus the largest remaining
  // summand (the summand is unimodal in t).
  const long double u_start = std::log(static_cast<long double>(t - 1));
  long double u_peak = u_start;
  if (log_summand_slope(s, log_c, u_start) > 0.0L) {
    long double lo = u_start;
    long double hi = u_start + 1.0L;
    while (log_summand_slope(s, log_c, hi) > 0.0L) hi *= 2.0L;
    for (int i = 0; i < 200; ++i) {
      const long double mid = 0.5L * (lo + hi);
      (log_summand_slope(s, log_c, mid) > 0.0L ? lo : hi) = mid;
    }
    u_peak = hi;
  }
  const long double tail =
      tail_integral(s, num_arms, log_c, u_start) + std::exp(log_summand(s, log_c, u_peak));
  return static_cast<double>(sum + compensation + tail);
}

bool satisfies(std::size_t num_arms, double rho, long double log_c) {
  const double bound = series_bound(num_arms, rho, log_c);
  return std::isfinite(bound) && std::log(static_cast<long double>(bound)) <= log_c;
}

}  // namespace

double threshold_series_bound(std::size_t num_arms, double rho, double c_const) {
  if (num_arms < 2 || !(rho > 0.0) || !(c_const >= 1.0)) {
    throw std::invalid_argument("series bound needs K >= 2, rho > 0, C >= 1");
  }
  return series_bound(num_arms, rho, std::log(static_cast<long double>(c_const)));
}

double compute_c(std::size_t num_arms, double rho) {
  if (num_arms < 2) throw std::invalid_argument("threshold constant needs K >= 2");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");

  static std::mutex mutex;
  static std::map<std::pair<std::size_t, double>, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find({num_arms, rho}); it != cache.end()) return it->second;

  long double lo = 0.0L;
  long double hi = 1.0L;
  double c_const = 1.0;
  if (!satisfies(num_arms, rho, lo)) {
    while (!satisfies(num_arms, rho, hi)) {
      lo = hi;
      hi *= 2.0L;
      if (hi > kMaxLogC) {
        if (satisfies(num_arms, rho, kMaxLogC)) {
          hi = kMaxLogC;
          break;
        }
        throw NoFiniteC(num_arms, rho);
      }
    }
    while (hi - lo > 1e-13L * hi) {
      const long double mid = 0.5L * (lo + hi);
      (satisfies(num_arms, rho, mid) ? hi : lo) = mid;
    }
    c_const = static_cast<double>(std::exp(hi));
    // Guard against rounding in the conversion back to double.
    while (!satisfies(num_arms, rho, std::log(static_cast<long double>(c_const)))) {
      c_const = std::nextafter(c_const, std::numeric_limits<double>::infinity());
    }
  }

  cache.emplace(std::pair{num_arms, rho}, c_const);
  return c_const;
}

Threshold make_threshold(ThresholdMode mode, std::size_t num_arms, double rho, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const double c_const = mode == ThresholdMode::Paper ? compute_c(num_arms, rho) : 1.0;
  return {c_const, rho, delta};
}

double zeta(const Threshold& threshold, std::uint64_t t) {
  if (t < 1) throw std::invalid_argument("threshold is defined for t >= 1");
  return std::log(threshold.c_const) + (1.0 + threshold.rho) * std::log(static_cast<double>(t)) +
         std::log(1.0 / threshold.delta);
}

}  // namespace boxbai
