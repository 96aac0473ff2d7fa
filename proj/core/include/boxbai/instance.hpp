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

#ifndef BOXBAI_INSTANCE_HPP
#define BOXBAI_INSTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace boxbai {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class RewardModel {
  GaussianUnitVariance,
  /// Bernoulli rewards; means must lie in [0, 1].
  BernoulliLike,
};

/// Raw, unvalidated description of a boxed bandit. Indices are zero based.
struct ProblemInstance {
  Matrix q;                ///< q(m, k): probability that box m pulls arm k.
  std::vector<double> mu;  ///< Mean reward of each arm.
  RewardModel reward_model = RewardModel::GaussianUnitVariance;
  /// Optional partition of the arms across boxes.
  std::optional<std::vector<std::vector<std::size_t>>> arm_sets;

  [[nodiscard]] std::size_t num_boxes() const noexcept { return q.rows(); }
  [[nodiscard]] std::size_t num_arms() const noexcept { return mu.size(); }
};

class ValidatedInstance;

/// Checks every instance invariant. Throws RowNotStochastic, TiedBestArm,
/// PartitionViolation or DimensionMismatch naming the offending index.
ValidatedInstance validate(ProblemInstance instance);

/// An instance that passed validate(). Immutable and shareable across threads.
class ValidatedInstance {
 public:
  [[nodiscard]] const ProblemInstance& raw() const noexcept { return instance_; }
  [[nodiscard]] const Matrix& q() const noexcept { return instance_.q; }
  [[nodiscard]] const std::vector<double>& mu() const noexcept { return instance_.mu; }
  [[nodiscard]] RewardModel reward_model() const noexcept { return instance_.reward_model; }
  [[nodiscard]] std::size_t num_boxes() const noexcept { return instance_.num_boxes(); }
  [[nodiscard]] std::size_t num_arms() const noexcept { return instance_.num_arms(); }
  [[nodiscard]] std::size_t best_arm() const noexcept { return best_arm_; }
  [[nodiscard]] bool is_partition() const noexcept { return instance_.arm_sets.has_value(); }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& arm_sets() const {
    return instance_.arm_sets.value();
  }
  /// Box owning `arm`; only meaningful for partition instances.
  [[nodiscard]] std::size_t box_of_arm(std::size_t arm) const { return box_of_arm_.at(arm); }

  /// Arm selected by box `box` for a uniform variate u in [0, 1).
  [[nodiscard]] std::size_t arm_for_uniform(std::size_t box, double u) const;

 private:
  friend ValidatedInstance validate(ProblemInstance instance);
  ValidatedInstance() = default;

  ProblemInstance instance_;
  std::size_t best_arm_ = 0;
  Matrix cumulative_;
  std::vector<std::size_t> last_positive_;
  std::vector<std::size_t> box_of_arm_;
};

/// Independent deterministic random streams owned by one trial. The
/// environment draws arms and rewards from their own streams so that a
/// policy consuming randomness never perturbs what the environment produces.
class TrialStreams {
 public:
  explicit TrialStreams(std::uint64_t seed);

  std::mt19937_64& arm_stream() noexcept { return arm_; }
  std::mt19937_64& reward_stream() noexcept { return reward_; }
  std::mt19937_64& policy_stream() noexcept { return policy_; }

 private:
  std::mt19937_64 arm_;
  std::mt19937_64 reward_;
  std::mt19937_64 policy_;
};

struct BoxDraw {
  std::size_t arm;
  double reward;
};

/// Selects `box` once: draws the arm from row q(box, .) and a reward for it.
BoxDraw sample_box(const ValidatedInstance& instance, std::size_t box, TrialStreams& streams);

/// Sub-optimality gaps relative to the unique best arm. The entry of the best
/// arm holds the smallest gap among the others.
struct Gaps {
  std::vector<double> delta;
  double delta_best = 0.0;
};

Gaps gaps(const ValidatedInstance& instance);

}  // namespace boxbai

#endif  // BOXBAI_INSTANCE_HPP
