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

#ifndef BOXBAI_HARNESS_HPP
#define BOXBAI_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxbai/allocation_solver.hpp"
#include "boxbai/bbmts.hpp"
#include "boxbai/instance.hpp"
#include "boxbai/outcome.hpp"
#include "boxbai/statistics.hpp"

namespace boxbai {

enum class Algorithm { Bbmts, Bbsea };

/// Everything needed to reproduce a Monte Carlo experiment.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Bbmts;
  std::optional<ValidatedInstance> instance;
  std::vector<double> delta_grid;  ///< descending, each in (0, 1)
  std::optional<double> rho;       ///< required for bbmts
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  ThresholdMode threshold_mode = ThresholdMode::Paper;
  std::uint64_t max_steps = 0;     ///< 0 picks the algorithm's default
  std::uint64_t trace_every = 0;   ///< 0 = off
  ResolveMode resolve = ResolveMode::Strict;
  WstarSelection selection = WstarSelection::Solver;
  bool stopping = true;
  double solver_tol = 1e-8;
  std::filesystem::path output_path = ".";

  [[nodiscard]] std::uint64_t effective_max_steps() const;
};

/// Parses the line-oriented `key = value` format. Matrix and list values use
/// bracket literals and may span lines. Arm indices in `arm_sets` are one
/// based. Throws ParseError or ValidationError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct TrialRow {
  std::uint64_t seed = 0;
  double delta = 0.0;
  std::uint64_t tau = 0;
  std::optional<std::size_t> declared;  ///< zero based; empty when capped
  bool correct = false;
  std::optional<double> final_tracking_distance;
  bool capped = false;
  std::vector<TracePoint> trace;
};

struct AggregateRow {
  double delta = 0.0;
  std::uint64_t trials = 0;
  double error_rate = 0.0;
  double mean_tau = 0.0;
  double stddev_tau = 0.0;
  double mean_tau_over_log1delta = 0.0;
  std::optional<double> t_star;                          ///< bbmts
  std::optional<std::pair<double, double>> bounds;       ///< bbsea: (sum beta_m, lower bound)
  std::optional<double> mean_final_tracking_distance;    ///< bbmts
  std::uint64_t capped = 0;
};

struct ExperimentResult {
  std::vector<TrialRow> trials;  ///< grouped by delta, seed ascending within
  std::vector<AggregateRow> aggregates;
  [[nodiscard]] bool any_capped() const;
};

/// Runs trials * |delta_grid| independent runs on `workers` threads. Trial i
/// of every delta uses seed base_seed + i. Output does not depend on the
/// number of workers.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

/// Aggregates seed-sorted trial rows of a single delta.
AggregateRow aggregate(const ExperimentConfig& config, double delta,
                       const std::vector<TrialRow>& rows, std::optional<double> t_star);

struct Summary {
  std::string csv;
  std::string table;
};

/// CSV (delta,trials,error_rate,mean_tau,stddev_tau,slope,t_star_or_bounds,
/// tracking_distance) plus an aligned human-readable rendering.
Summary emit_summary(const std::vector<AggregateRow>& rows);

std::string trials_csv(const std::vector<TrialRow>& rows);
std::string trace_csv(const std::vector<TrialRow>& rows);

/// Six significant digits, '.' decimal separator, independent of locale.
std::string format_number(double value);

/// Writes trials.csv, summary.csv and (if any trace) trace.csv into `dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace boxbai

#endif  // BOXBAI_HARNESS_HPP
