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

#include "boxbai/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boxbai/errors.hpp"

namespace boxbai {

namespace {

constexpr double kRowTolerance = 1e-12;

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch(cols_, r.size());
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch(cols, rows[r].size());
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

ValidatedInstance validate(ProblemInstance instance) {
  const std::size_t num_boxes = instance.num_boxes();
  const std::size_t num_arms = instance.num_arms();
  if (num_boxes == 0) throw std::invalid_argument("instance needs at least one box");
  if (num_arms == 0) throw std::invalid_argument("instance needs at least one arm");
  if (instance.q.cols() != num_arms) throw DimensionMismatch(num_arms, instance.q.cols());

  for (std::size_t m = 0; m < num_boxes; ++m) {
    double sum = 0.0;
    for (double p : instance.q.row(m)) {
      if (!(p >= 0.0 && p <= 1.0)) throw RowNotStochastic(m);
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) throw RowNotStochastic(m);
  }

  for (std::size_t k = 0; k < num_arms; ++k) {
    if (!std::isfinite(instance.mu[k])) throw std::invalid_argument("arm mean is not finite");
    if (instance.reward_model == RewardModel::BernoulliLike &&
        (instance.mu[k] < 0.0 || instance.mu[k] > 1.0)) {
      throw std::invalid_argument("Bernoulli arm means must lie in [0, 1]");
    }
  }

  const auto best = static_cast<std::size_t>(
      std::max_element(instance.mu.begin(), instance.mu.end()) - instance.mu.begin());
  for (std::size_t k = 0; k < num_arms; ++k) {
    if (k != best && instance.mu[k] == instance.mu[best]) throw TiedBestArm(k);
  }

  ValidatedInstance out;
  if (instance.arm_sets) {
    const auto& sets = *instance.arm_sets;
    if (sets.size() != num_boxes) throw DimensionMismatch(num_boxes, sets.size());
    out.box_of_arm_.assign(num_arms, num_boxes);
    for (std::size_t m = 0; m < num_boxes; ++m) {
      for (std::size_t k : sets[m]) {
        if (k >= num_arms) throw PartitionViolation(k, "arm index out of range");
        if (out.box_of_arm_[k] != num_boxes) throw PartitionViolation(k, "arm in two boxes");
        out.box_of_arm_[k] = m;
      }
    }
    for (std::size_t k = 0; k < num_arms; ++k) {
      if (out.box_of_arm_[k] == num_boxes) throw PartitionViolation(k, "arm in no box");
    }
    for (std::size_t m = 0; m < num_boxes; ++m) {
      for (std::size_t k = 0; k < num_arms; ++k) {
        const bool member = out.box_of_arm_[k] == m;
        if (member != (instance.q(m, k) > 0.0)) {
          throw PartitionViolation(m, "support of q row differs from arm set");
        }
      }
    }
  }

  out.cumulative_ = Matrix(num_boxes, num_arms);
  out.last_positive_.assign(num_boxes, 0);
  for (std::size_t m = 0; m < num_boxes; ++m) {
    double running = 0.0;
    for (std::size_t k = 0; k < num_arms; ++k) {
      running += instance.q(m, k);
      out.cumulative_(m, k) = running;
      if (instance.q(m, k) > 0.0) out.last_positive_[m] = k;
    }
  }
  out.best_arm_ = best;
  out.instance_ = std::move(instance);
  return out;
}

std::size_t ValidatedInstance::arm_for_uniform(std::size_t box, double u) const {
  const auto row = cumulative_.row(box);
  const auto it = std::upper_bound(row.begin(), row.end(), u);
  // Rounding can leave the final cumulative entry a hair below u.
  if (it == row.end()) return last_positive_[box];
  return static_cast<std::size_t>(it - row.begin());
}

TrialStreams::TrialStreams(std::uint64_t seed) {
  const auto lo = static_cast<std::uint32_t>(seed);
  const auto hi = static_cast<std::uint32_t>(seed >> 32);
  std::seed_seq arm_seq{lo, hi, 0x61726dU};
  std::seed_seq reward_seq{lo, hi, 0x726577U};
  std::seed_seq policy_seq{lo, hi, 0x706f6cU};
  arm_.seed(arm_seq);
  reward_.seed(reward_seq);
  policy_.seed(policy_seq);
}

BoxDraw sample_box(const ValidatedInstance& instance, std::size_t box, TrialStreams& streams) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t arm = instance.arm_for_uniform(box, uniform(streams.arm_stream()));
  const double mean = instance.mu()[arm];
  double reward = 0.0;
  switch (instance.reward_model()) {
    case RewardModel::GaussianUnitVariance: {
      std::normal_distribution<double> noise(mean, 1.0);
      reward = noise(streams.reward_stream());
      break;
    }
    case RewardModel::BernoulliLike:
      reward = uniform(streams.reward_stream()) < mean ? 1.0 : 0.0;
      break;
  }
  return {arm, reward};
}

Gaps gaps(const ValidatedInstance& instance) {
  const std::size_t num_arms = instance.num_arms();
  if (num_arms < 2) throw std::invalid_argument("gaps need at least two arms");
  const std::size_t best = instance.best_arm();
  const auto& mu = instance.mu();
  Gaps out;
  out.delta.resize(num_arms);
  out.delta_best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < num_arms; ++k) {
    if (k == best) continue;
    out.delta[k] = mu[best] - mu[k];
    out.delta_best = std::min(out.delta_best, out.delta[k]);
  }
  out.delta[best] = out.delta_best;
  return out;
}

}  // namespace boxbai
