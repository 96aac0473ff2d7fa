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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "boxbai/errors.hpp"
#include "boxbai/harness.hpp"

namespace boxbai {
namespace {

const char* const kPaperConfig = R"(# two boxes, four arms
algorithm = bbmts
q = [[0.3, 0.3, 0.3, 0.1],
     [0.3, 0.3, 0.1, 0.3]]
mu = [0.5, 0.4, 0.3, 0.3]
delta_grid = [0.1]
rho = 1
)";

const char* const kThreeArmConfig = R"(algorithm = bbmts
q = [[0.6, 0.3, 0.1], [0.1, 0.3, 0.6]]
mu = [1, 0.5, 0.25]
delta_grid = [0.1, 0.01]
rho = 1
trials = 4
threshold = practical
base_seed = 100
)";

const char* const kPartitionConfig = R"(algorithm = bbsea
q = [[0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5]]
mu = [1, 0.3, 0.5, 0]
arm_sets = [[1, 2], [3, 4]]
delta_grid = [0.1]
trials = 3
)";

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::size_t count_columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::string expect_validation_field(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<none>";
}

TEST(Config, ParsesPaperInstance) {
  const auto config = parse_config(kPaperConfig);
  EXPECT_EQ(config.algorithm, Algorithm::Bbmts);
  ASSERT_TRUE(config.instance.has_value());
  EXPECT_EQ(config.instance->num_boxes(), 2u);
  EXPECT_EQ(config.instance->num_arms(), 4u);
  EXPECT_EQ(config.instance->q()(1, 2), 0.1);
  EXPECT_EQ(config.delta_grid, std::vector<double>{0.1});
  EXPECT_EQ(config.rho, 1.0);
  EXPECT_EQ(config.trials, 1u);
  EXPECT_EQ(config.threshold_mode, ThresholdMode::Paper);
  EXPECT_EQ(config.effective_max_steps(), 10'000'000u);
}

TEST(Config, ParsesOptionalKeys) {
  const auto config = parse_config(std::string(kPaperConfig) +
                                   "trace = on\nresolve = thinned\nwstar_selection = last\n"
                                   "stopping = off\nmax_steps = 1e5\nsolver_tol = 1e-9\n"
                                   "output = results\n");
  EXPECT_EQ(config.trace_every, 1000u);
  EXPECT_EQ(config.resolve, ResolveMode::Thinned);
  EXPECT_EQ(config.selection, WstarSelection::TowardLast);
  EXPECT_FALSE(config.stopping);
  EXPECT_EQ(config.max_steps, 100000u);
  EXPECT_EQ(config.solver_tol, 1e-9);
  EXPECT_EQ(config.output_path, std::filesystem::path("results"));
}

TEST(Config, PartitionUsesOneBasedArms) {
  const auto config = parse_config(kPartitionConfig);
  ASSERT_TRUE(config.instance->is_partition());
  EXPECT_EQ(config.instance->arm_sets()[1], (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(config.instance->reward_model(), RewardModel::BernoulliLike);
  EXPECT_EQ(config.effective_max_steps(), 100'000'000u);
}

TEST(Config, MissingRhoForBbmts) {
  EXPECT_EQ(expect_validation_field(
                "algorithm = bbmts\nq = [[1, 0], [0, 1]]\nmu = [1, 0]\ndelta_grid = [0.1]\n"),
            "rho");
}

TEST(Config, DeltaOutsideUnitInterval) {
  EXPECT_EQ(expect_validation_field("algorithm = bbmts\nq = [[1, 0], [0, 1]]\nmu = [1, 0]\n"
                                    "delta_grid = [1.5]\nrho = 1\n"),
            "delta_grid");
}

TEST(Config, DeltaGridMustDescend) {
  EXPECT_EQ(expect_validation_field("algorithm = bbmts\nq = [[1, 0], [0, 1]]\nmu = [1, 0]\n"
                                    "delta_grid = [0.01, 0.1]\nrho = 1\n"),
            "delta_grid");
}

TEST(Config, TrialsAtLeastOne) {
  EXPECT_EQ(expect_validation_field(std::string(kPaperConfig) + "trials = 0\n"), "trials");
}

TEST(Config, InstanceErrorsNameTheField) {
  EXPECT_EQ(expect_validation_field("algorithm = bbmts\nq = [[0.5, 0.4]]\nmu = [1, 0]\n"
                                    "delta_grid = [0.1]\nrho = 1\n"),
            "q");
  EXPECT_EQ(expect_validation_field("algorithm = bbmts\nq = [[0.5, 0.5]]\nmu = [1, 1]\n"
                                    "delta_grid = [0.1]\nrho = 1\n"),
            "mu");
  EXPECT_EQ(expect_validation_field("algorithm = bbsea\nq = [[0.5, 0.5]]\nmu = [1, 0]\n"
                                    "arm_sets = [[1]]\ndelta_grid = [0.1]\n"),
            "arm_sets");
  EXPECT_EQ(expect_validation_field("algorithm = bbsea\nq = [[0.5, 0.5]]\nmu = [1, 0]\n"
                                    "delta_grid = [0.1]\n"),
            "arm_sets");
}

TEST(Config, SyntaxErrorsReportTheLine) {
  try {
    parse_config("algorithm = bbmts\nbogus = 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_config("algorithm = bbmts\n\nmu = [1, x]\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_config("algorithm = bbmts\nalgorithm = bbsea\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_config("algorithm = bbmts\nq = [[1, 0]\n"), ParseError);
  EXPECT_THROW(parse_config("just text\n"), ParseError);
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "boxbai_test_config.cfg";
  {
    std::ofstream out(path);
    out << kPaperConfig;
  }
  EXPECT_EQ(load_config(path).instance->num_arms(), 4u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ParseError);
}

TEST(Experiment, ReproducibleCsv) {
  auto config = parse_config(kPaperConfig);
  config.threshold_mode = ThresholdMode::Practical;
  const auto a = run_experiment(config);
  const auto b = run_experiment(config);
  EXPECT_EQ(trials_csv(a.trials), trials_csv(b.trials));
  EXPECT_EQ(emit_summary(a.aggregates).csv, emit_summary(b.aggregates).csv);
}

TEST(Experiment, WorkerCountDoesNotChangeOutput) {
  const auto config = parse_config(kThreeArmConfig);
  const auto serial = run_experiment(config, 1);
  const auto parallel = run_experiment(config, 3);
  EXPECT_EQ(trials_csv(serial.trials), trials_csv(parallel.trials));
  EXPECT_EQ(emit_summary(serial.aggregates).csv, emit_summary(parallel.aggregates).csv);
}

TEST(Experiment, RowsAndSeeds) {
  const auto config = parse_config(kThreeArmConfig);
  const auto result = run_experiment(config);
  ASSERT_EQ(result.trials.size(), 8u);
  ASSERT_EQ(result.aggregates.size(), 2u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(result.trials[i].seed, 100u + i % 4);
    EXPECT_EQ(result.trials[i].delta, config.delta_grid[i / 4]);
    EXPECT_TRUE(result.trials[i].final_tracking_distance.has_value());
  }
  double errors = 0.0;
  double taus = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!result.trials[i].correct) errors += 1.0;
    taus += static_cast<double>(result.trials[i].tau);
  }
  EXPECT_EQ(result.aggregates[0].error_rate, errors / 4.0);
  EXPECT_EQ(result.aggregates[0].mean_tau, taus / 4.0);
  EXPECT_NEAR(result.aggregates[0].mean_tau_over_log1delta, taus / 4.0 / std::log(10.0), 1e-9);
  EXPECT_TRUE(result.aggregates[0].t_star.has_value());
  EXPECT_GE(result.aggregates[0].mean_tau, 2.0);
}

TEST(Experiment, CappedTrialsAreKept) {
  auto config = parse_config(kThreeArmConfig);
  config.max_steps = 20;
  const auto result = run_experiment(config);
  ASSERT_EQ(result.trials.size(), 8u);
  EXPECT_TRUE(result.any_capped());
  for (const auto& row : result.trials) {
    EXPECT_TRUE(row.capped);
    EXPECT_FALSE(row.correct);
    EXPECT_FALSE(row.declared.has_value());
    EXPECT_EQ(row.tau, 20u);
  }
  EXPECT_EQ(result.aggregates[0].error_rate, 1.0);
  EXPECT_EQ(result.aggregates[0].capped, 4u);
  EXPECT_NE(trials_csv(result.trials).find(",NA,0,"), std::string::npos);
}

TEST(Experiment, SlopeDecreasesAlongTheGrid) {
  auto config = parse_config(kThreeArmConfig);
  config.trials = 40;
  const auto result = run_experiment(config);
  EXPECT_GE(result.aggregates[0].mean_tau_over_log1delta,
            result.aggregates[1].mean_tau_over_log1delta);
}

TEST(Experiment, PartitionRowsCarryBounds) {
  const auto config = parse_config(kPartitionConfig);
  const auto result = run_experiment(config);
  ASSERT_EQ(result.aggregates.size(), 1u);
  const auto& row = result.aggregates[0];
  ASSERT_TRUE(row.bounds.has_value());
  EXPECT_GT(row.bounds->first, row.bounds->second);
  EXPECT_FALSE(row.t_star.has_value());
  EXPECT_FALSE(row.mean_final_tracking_distance.has_value());
  const auto csv = emit_summary(result.aggregates).csv;
  EXPECT_NE(csv.find(';'), std::string::npos);
  EXPECT_NE(csv.find(",NA\n"), std::string::npos);
}

TEST(Summary, HeaderAndShape) {
  AggregateRow row;
  row.delta = 0.1;
  row.trials = 10;
  row.error_rate = 0.0;
  row.mean_tau = 1234567.0;
  row.stddev_tau = 0.0001234567;
  row.mean_tau_over_log1delta = 2.0 / 3.0;
  row.t_star = 7.5e-4;
  const auto summary = emit_summary({row});
  EXPECT_EQ(count_lines(summary.csv), 2u);
  std::istringstream lines(summary.csv);
  std::string header;
  std::string data;
  std::getline(lines, header);
  std::getline(lines, data);
  EXPECT_EQ(header, "delta,trials,error_rate,mean_tau,stddev_tau,slope,t_star_or_bounds,tracking_distance");
  EXPECT_EQ(count_columns(data), 8u);
  EXPECT_EQ(data, "0.1,10,0,1.23457e+06,0.000123457,0.666667,0.00075,NA");
  EXPECT_EQ(count_lines(summary.table), 2u);
  EXPECT_NE(summary.table.find("1.23457e+06"), std::string::npos);
  EXPECT_THROW(emit_summary({}), std::invalid_argument);
}

TEST(Summary, NumberFormatting) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format_number(123456789.0), "1.23457e+08");
  EXPECT_EQ(format_number(1e-7), "1e-07");
  EXPECT_EQ(format_number(-2.5), "-2.5");
}

TEST(Outputs, WritesFiles) {
  auto config = parse_config(std::string(kPaperConfig) + "trace = 100\nthreshold = practical\n");
  const auto result = run_experiment(config);
  const auto dir = std::filesystem::temp_directory_path() / "boxbai_test_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(result, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "trials.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "trace.csv"));
  std::ifstream trials(dir / "trials.csv");
  std::string header;
  std::getline(trials, header);
  EXPECT_EQ(header, "seed,delta,tau,declared,correct,final_tracking_distance,capped");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace boxbai
