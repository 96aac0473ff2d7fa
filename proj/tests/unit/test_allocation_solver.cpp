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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "boxbai/allocation_solver.hpp"
#include "boxbai/errors.hpp"
#include "oracles.hpp"

namespace boxbai {
namespace {

using testing::paper_instance;

BoxedModel two_arm_identity() {
  return BoxedModel{Matrix::identity(2), {1.0, 0.0}, 0};
}

/// Random instance with M boxes, K arms and Gaussian means on a coarse
/// dyadic lattice so shifted copies are exact.
BoxedModel random_model(std::size_t boxes, std::size_t arms, std::mt19937_64& rng,
                        double zero_probability = 0.0) {
  BoxedModel model;
  model.q = testing::random_stochastic(boxes, arms, rng, zero_probability);
  std::uniform_int_distribution<int> lattice(-512, 512);
  do {
    model.mu.assign(arms, 0.0);
    for (auto& m : model.mu) m = lattice(rng) / 256.0;
    model.best_arm = testing::argmax(model.mu);
  } while (std::count(model.mu.begin(), model.mu.end(), model.mu[model.best_arm]) > 1);
  return model;
}

TEST(EffectiveArmWeights, PaperRows) {
  const auto inst = paper_instance();
  const auto first = effective_arm_weights(inst, Allocation::vertex(2, 0));
  const std::vector<double> row{0.3, 0.3, 0.3, 0.1};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(first[k], row[k]);
  const auto mixed = effective_arm_weights(inst, Allocation({0.5, 0.5}));
  const std::vector<double> expected{0.3, 0.3, 0.2, 0.2};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(mixed[k], expected[k], 1e-15);
}

TEST(EffectiveArmWeights, IdentityIsTheIdentityMap) {
  const std::vector<double> w{0.1, 0.2, 0.7};
  const auto out = effective_arm_weights(Matrix::identity(3), w);
  EXPECT_EQ(out, w);
}

TEST(Allocation, RejectsInvalidWeights) {
  EXPECT_THROW(Allocation({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(Allocation({1.2, -0.2}), std::invalid_argument);
  EXPECT_NO_THROW(Allocation({0.5, 0.5 + 1e-13}));
}

TEST(Psi, PaperInstanceAtBarycenter) {
  EXPECT_NEAR(psi(paper_instance(), Allocation({0.5, 0.5})), 7.5e-4, 1e-15);
}

TEST(Psi, TwoArmIdentity) {
  EXPECT_NEAR(psi(two_arm_identity(), Allocation({0.5, 0.5})), 0.125, 1e-15);
}

TEST(Psi, ZeroWhenBestArmIsUnreachable) {
  const BoxedModel model{Matrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}},
                         {1.0, 0.5, 0.0},
                         0};
  EXPECT_EQ(psi(model, Allocation({0.3, 0.7, 0.0})), 0.0);
  EXPECT_GT(psi(model, Allocation({0.3, 0.3, 0.4})), 0.0);
}

TEST(Psi, MatchesDirectInnerMinimization) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t arms = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t boxes = 1 + static_cast<std::size_t>(trial % 4);
    const auto model = random_model(boxes, arms, rng, 0.2);
    const auto w = testing::random_simplex_point(boxes, rng);
    const double expected = testing::inner_infimum(model.q, model.mu, model.best_arm, w);
    EXPECT_NEAR(psi(model, w), expected, 1e-10) << "trial " << trial;
  }
}

TEST(Psi, ConcaveAlongSegments) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto model = random_model(3, 4, rng, 0.3);
    const auto w1 = testing::random_simplex_point(3, rng);
    const auto w2 = testing::random_simplex_point(3, rng);
    const double a = unit(rng);
    std::vector<double> mid(3);
    for (std::size_t m = 0; m < 3; ++m) mid[m] = a * w1[m] + (1.0 - a) * w2[m];
    EXPECT_GE(psi(model, mid), a * psi(model, w1) + (1.0 - a) * psi(model, w2) - 1e-12);
  }
}

TEST(Psi, TranslationInvariant) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto model = random_model(2, 4, rng);
    const auto w = testing::random_simplex_point(2, rng);
    const double before = psi(model, w);
    for (auto& m : model.mu) m += 3.0;
    EXPECT_EQ(psi(model, w), before);
  }
}

TEST(Solve, PaperInstanceIsConstantOnTheSimplex) {
  const auto inst = paper_instance();
  const auto result = solve(inst);
  EXPECT_NEAR(result.t_star, 7.5e-4, 1e-8);
  for (const std::vector<double>& w : std::vector<std::vector<double>>{
           {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {0.25, 0.75}}) {
    EXPECT_NEAR(psi(inst, Allocation(w)), 7.5e-4, 1e-12);
  }
}

TEST(Solve, TwoArmIdentity) {
  const auto result = solve(two_arm_identity());
  EXPECT_NEAR(result.t_star, 0.125, 1e-8);
  EXPECT_NEAR(result.w_star[0], 0.5, 1e-4);
  EXPECT_TRUE(result.converged);
  const double oracle =
      testing::brute_force_t_star(Matrix::identity(2), {1.0, 0.0}, 0);
  EXPECT_NEAR(result.t_star, oracle, 1e-10);
}

TEST(Solve, SingleBoxNeedsNoSearch) {
  const BoxedModel model{Matrix{{0.2, 0.5, 0.3}}, {1.0, 0.2, 0.4}, 0};
  const auto result = solve(model);
  EXPECT_EQ(result.w_star[0], 1.0);
  EXPECT_EQ(result.t_star, psi(model, Allocation({1.0})));
}

TEST(Solve, DegenerateModelReturnsZero) {
  const BoxedModel model{Matrix{{0.0, 1.0}, {0.0, 1.0}}, {1.0, 0.0}, 0};
  const auto result = solve(model);
  EXPECT_EQ(result.t_star, 0.0);
  EXPECT_TRUE(result.degenerate);
}

TEST(Solve, MatchesNestedSearchOracleForSmallM) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t boxes = 2 + static_cast<std::size_t>(trial % 2);
    const std::size_t arms = 2 + static_cast<std::size_t>(trial % 3);
    const auto model = random_model(boxes, arms, rng, 0.2);
    const auto result = solve(model);
    const double oracle = testing::brute_force_t_star(model.q, model.mu, model.best_arm);
    EXPECT_NEAR(result.t_star, oracle, 1e-5) << "trial " << trial;
    EXPECT_GE(psi(model, result.w_star), result.t_star - 1e-8);
  }
}

TEST(Solve, DominatesRandomPointsForLargerM) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = random_model(6, 5, rng, 0.3);
    const auto result = solve(model);
    EXPECT_LE(result.certificate_gap, 1e-8);
    EXPECT_GE(result.upper_bound, result.t_star);
    for (int i = 0; i < 2000; ++i) {
      const auto w = testing::random_simplex_point(6, rng);
      ASSERT_LE(psi(model, w), result.t_star + 1e-8);
    }
  }
}

TEST(Solve, Deterministic) {
  std::mt19937_64 rng(5);
  const auto model = random_model(3, 4, rng);
  const auto a = solve(model);
  const auto b = solve(model);
  EXPECT_EQ(a.t_star, b.t_star);
  EXPECT_EQ(a.w_star, b.w_star);
}

TEST(GridSearch, AgreesWithNestedSearch) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const auto model = random_model(2 + static_cast<std::size_t>(trial % 2), 3, rng);
    const auto grid = grid_search_characteristic_time(model);
    EXPECT_NEAR(grid.value, testing::brute_force_t_star(model.q, model.mu, model.best_arm),
                1e-7 * grid.value);
  }
}

TEST(Membership, PaperInstanceWholeSimplex) {
  const auto inst = paper_instance();
  const auto model = BoxedModel::from_instance(inst);
  const auto result = solve(model);
  EXPECT_TRUE(wstar_membership(model, Allocation({0.123, 0.877}), result.t_star, 1e-9));
  EXPECT_TRUE(wstar_membership(model, result.w_star, result.t_star, 1e-8));
}

TEST(Membership, TwoArmVertexIsNotOptimal) {
  const auto model = two_arm_identity();
  const auto result = solve(model);
  EXPECT_FALSE(wstar_membership(model, Allocation({1.0, 0.0}), result.t_star, 1e-6));
}

TEST(Membership, MidpointsOfOptimizersStayOptimal) {
  const auto inst = paper_instance();
  const auto model = BoxedModel::from_instance(inst);
  const auto result = solve(model);
  const double eps = 1e-9;
  std::vector<std::vector<double>> members;
  for_each_simplex_grid_point(2, 50, [&](std::span<const double> w) {
    if (psi(model, w) >= result.t_star - eps) members.emplace_back(w.begin(), w.end());
  });
  ASSERT_EQ(members.size(), 51u);
  for (const auto& a : members) {
    for (const auto& b : members) {
      const std::vector<double> mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
      EXPECT_GE(psi(model, mid), result.t_star - 2 * eps);
    }
  }
}

TEST(Dinf, PointDistance) {
  const std::vector<double> u{0.6, 0.4};
  const std::vector<double> v{0.5, 0.5};
  EXPECT_EQ(dinf_point(u, u), 0.0);
  EXPECT_NEAR(dinf_point(u, v), 0.1, 1e-15);
  const std::vector<double> w{1.0};
  EXPECT_THROW(dinf_point(u, w), DimensionMismatch);
}

TEST(Dinf, PaperInstanceSetDistanceIsZero) {
  const auto model = BoxedModel::from_instance(paper_instance());
  const auto result = solve(model);
  const std::vector<double> u{0.9, 0.1};
  const auto d = dinf_to_set(u, model, result, 1e-9);
  EXPECT_NEAR(d.distance, 0.0, 1e-12);
  EXPECT_EQ(d.resolution, 200u);
}

TEST(Dinf, UniqueOptimizerDistance) {
  const auto model = two_arm_identity();
  const auto result = solve(model);
  const std::vector<double> u{0.8, 0.2};
  EXPECT_NEAR(dinf_to_set(u, model, result, 1e-9).distance, 0.3, 1e-4);
  const std::vector<double> at(result.w_star.weights().begin(), result.w_star.weights().end());
  EXPECT_EQ(dinf_to_set(at, model, result, 1e-9).distance, 0.0);
}

TEST(SelectMember, ExtremesOfTheOptimizerSet) {
  const auto model = BoxedModel::from_instance(paper_instance());
  const auto result = solve(model);
  const auto first = select_member(model, result, WstarSelection::TowardFirst, 1e-8);
  const auto last = select_member(model, result, WstarSelection::TowardLast, 1e-8);
  EXPECT_NEAR(first[0], 1.0, 1e-9);
  EXPECT_NEAR(last[1], 1.0, 1e-9);
  EXPECT_EQ(select_member(model, result, WstarSelection::Solver, 1e-8), result.w_star);
}

TEST(SelectMember, UniqueOptimizerIsFixed) {
  const auto model = two_arm_identity();
  const auto result = solve(model);
  const auto first = select_member(model, result, WstarSelection::TowardFirst, 1e-10);
  EXPECT_NEAR(first[0], 0.5, 1e-3);
  EXPECT_GE(psi(model, first), result.t_star - 1e-10);
}

TEST(Classical, TwoArms) {
  EXPECT_NEAR(classical_characteristic_time(std::vector<double>{1.0, 0.0}), 0.125, 1e-9);
}

TEST(Classical, MatchesSolverOnIdentityInstances) {
  const std::vector<double> mu{1.0, 0.0, 0.0};
  const auto result = solve(BoxedModel{Matrix::identity(3), mu, 0});
  EXPECT_NEAR(classical_characteristic_time(mu), result.t_star, 1e-5);
}

TEST(Classical, TranslationInvariant) {
  const double a = classical_characteristic_time(std::vector<double>{2.5, 2.0});
  const double b = classical_characteristic_time(std::vector<double>{0.5, 0.0});
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_THROW(classical_characteristic_time(std::vector<double>{1.0, 1.0}), TiedBestArm);
}

TEST(SimplexGrid, CountsPoints) {
  std::size_t count = 0;
  for_each_simplex_grid_point(3, 10, [&](std::span<const double> w) {
    double s = 0.0;
    for (double x : w) s += x;
    EXPECT_NEAR(s, 1.0, 1e-12);
    ++count;
  });
  EXPECT_EQ(count, 66u);
}

}  // namespace
}  // namespace boxbai
