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

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "boxbai/allocation_solver.hpp"
#include "boxbai/bbsea.hpp"
#include "boxbai/errors.hpp"
#include "boxbai/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCapped = 3;

int run_command(const std::string& config_path, std::size_t workers,
                const std::string& out_dir) {
  const auto config = boxbai::load_config(config_path);
  const auto result = boxbai::run_experiment(config, workers);
  const std::filesystem::path dir = out_dir.empty() ? config.output_path : std::filesystem::path(out_dir);
  boxbai::write_outputs(result, dir);
  std::cout << boxbai::emit_summary(result.aggregates).table;
  if (result.any_capped()) {
    std::cerr << "some trials hit max_steps; see " << (dir / "trials.csv").string() << "\n";
    return kExitCapped;
  }
  return kExitOk;
}

int solve_command(const std::string& config_path) {
  const auto config = boxbai::load_config(config_path);
  const auto result = boxbai::solve(*config.instance);
  std::cout << "t_star " << boxbai::format_number(result.t_star) << "\n";
  std::cout << "w_star";
  for (double w : result.w_star.weights()) std::cout << ' ' << boxbai::format_number(w);
  std::cout << "\n";
  std::cout << "certificate_gap " << boxbai::format_number(result.certificate_gap) << "\n";
  if (result.degenerate) std::cout << "degenerate 1\n";
  return kExitOk;
}

int bounds_command(const std::string& config_path) {
  const auto config = boxbai::load_config(config_path);
  if (!config.instance->is_partition()) throw boxbai::ValidationError("arm_sets", "missing");
  std::cout << "delta,upper_bound,lower_bound,ratio\n";
  for (double delta : config.delta_grid) {
    const auto bounds = boxbai::theory_bounds(*config.instance, delta);
    std::cout << boxbai::format_number(delta) << ',' << boxbai::format_number(bounds.upper_bound)
              << ',' << boxbai::format_number(bounds.lower_bound) << ','
              << boxbai::format_number(bounds.upper_bound / bounds.lower_bound) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best arm identification with boxed sampling"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* solve = app.add_subcommand("solve", "Print the characteristic time and an optimizer");
  solve->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);

  auto* bounds = app.add_subcommand("bounds", "Print partition bounds over the delta grid");
  bounds->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return run_command(config_path, workers, out_dir);
    if (*solve) return solve_command(config_path);
    return bounds_command(config_path);
  } catch (const boxbai::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const boxbai::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const boxbai::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapped;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
