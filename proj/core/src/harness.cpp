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

#include "boxbai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "boxbai/bbsea.hpp"
#include "boxbai/errors.hpp"

namespace boxbai {

namespace {

constexpr std::uint64_t kBbmtsDefaultMaxSteps = 10'000'000;
constexpr std::uint64_t kBbseaDefaultMaxSteps = 100'000'000;
constexpr std::uint64_t kDefaultTraceEvery = 1000;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

/// Bracketed literal: a number or a list of literals.
struct Literal {
  bool is_list = false;
  double number = 0.0;
  std::vector<Literal> items;
};

class LiteralParser {
 public:
  LiteralParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Literal parse_all() {
    Literal out = parse();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  Literal parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of value");
    if (text_[pos_] == '[') {
      ++pos_;
      Literal list;
      list.is_list = true;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return list;
      }
      while (true) {
        list.items.push_back(parse());
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          return list;
        }
        fail("expected ',' or ']'");
      }
    }
    const auto end = text_.find_first_of(",] \t\r\n", pos_);
    const auto token = text_.substr(pos_, end == std::string_view::npos ? text_.size() - pos_
                                                                        : end - pos_);
    Literal number;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, number.number);
    if (ec != std::errc() || ptr != last || token.empty()) {
      fail("invalid number '" + std::string(token) + "'");
    }
    pos_ += token.size();
    return number;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct Entry {
  std::string value;
  std::size_t line = 0;
};

double parse_double(const Entry& e) {
  const Literal lit = LiteralParser(e.value, e.line).parse_all();
  if (lit.is_list) throw ParseError(e.line, "expected a number");
  return lit.number;
}

std::uint64_t parse_count(const Entry& e, const std::string& key) {
  const double v = parse_double(e);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e18) {
    throw ValidationError(key, "expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_vector(const Entry& e, const std::string& key) {
  const Literal lit = LiteralParser(e.value, e.line).parse_all();
  if (!lit.is_list) throw ParseError(e.line, "expected a list for '" + key + "'");
  std::vector<double> out;
  for (const auto& item : lit.items) {
    if (item.is_list) throw ParseError(e.line, "expected a flat list for '" + key + "'");
    out.push_back(item.number);
  }
  return out;
}

std::vector<std::vector<double>> parse_matrix(const Entry& e, const std::string& key) {
  const Literal lit = LiteralParser(e.value, e.line).parse_all();
  if (!lit.is_list) throw ParseError(e.line, "expected a matrix for '" + key + "'");
  std::vector<std::vector<double>> out;
  for (const auto& row : lit.items) {
    if (!row.is_list) throw ParseError(e.line, "expected rows in '" + key + "'");
    std::vector<double> r;
    for (const auto& item : row.items) {
      if (item.is_list) throw ParseError(e.line, "matrix entries must be numbers");
      r.push_back(item.number);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_switch(const Entry& e, const std::string& key) {
  const auto v = lower(e.value);
  if (v == "on" || v == "true" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "no") return false;
  throw ValidationError(key, "expected on or off");
}

std::map<std::string, Entry> read_entries(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& out) {
    if (pos > text.size()) return false;
    const auto nl = text.find('\n', pos);
    out = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    return true;
  };

  std::string_view raw;
  while (next_line(raw)) {
    const auto content = trim(strip_comment(raw));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = lower(trim(content.substr(0, eq)));
    if (key.empty()) throw ParseError(line_no, "missing key");
    Entry entry{std::string(trim(content.substr(eq + 1))), line_no};
    auto depth = [](std::string_view s) {
      return std::count(s.begin(), s.end(), '[') - std::count(s.begin(), s.end(), ']');
    };
    long open = depth(entry.value);
    while (open > 0) {
      std::string_view more;
      if (!next_line(more)) throw ParseError(entry.line, "unterminated bracket literal");
      const auto piece = trim(strip_comment(more));
      entry.value += ' ';
      entry.value += piece;
      open += depth(piece);
    }
    if (open < 0) throw ParseError(entry.line, "unbalanced ']'");
    if (entry.value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (entries.count(key) != 0) throw ParseError(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, std::move(entry));
  }
  return entries;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "algorithm", "q",         "mu",         "reward_model", "arm_sets", "delta_grid",
      "rho",       "trials",    "base_seed",  "threshold",    "max_steps", "trace",
      "output",    "resolve",   "wstar_selection", "stopping", "solver_tol"};
  return keys;
}

}  // namespace

std::uint64_t ExperimentConfig::effective_max_steps() const {
  if (max_steps != 0) return max_steps;
  return algorithm == Algorithm::Bbmts ? kBbmtsDefaultMaxSteps : kBbseaDefaultMaxSteps;
}

ExperimentConfig parse_config(std::string_view text) {
  const auto entries = read_entries(text);
  for (const auto& [key, entry] : entries) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError(entry.line, "unknown key '" + key + "'");
    }
  }
  for (const auto& [key, entry] : entries) {
    if (!entry.value.empty() && entry.value.front() == '[') {
      LiteralParser(entry.value, entry.line).parse_all();
    }
  }
  auto find = [&](const std::string& key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const Entry& {
    const Entry* e = find(key);
    if (e == nullptr) throw ValidationError(key, "missing");
    return *e;
  };

  ExperimentConfig config;
  {
    const auto v = lower(require("algorithm").value);
    if (v == "bbmts") {
      config.algorithm = Algorithm::Bbmts;
    } else if (v == "bbsea") {
      config.algorithm = Algorithm::Bbsea;
    } else {
      throw ValidationError("algorithm", "expected bbmts or bbsea");
    }
  }

  ProblemInstance instance;
  instance.q = Matrix::from_rows(parse_matrix(require("q"), "q"));
  instance.mu = parse_vector(require("mu"), "mu");
  if (const Entry* e = find("reward_model")) {
    const auto v = lower(e->value);
    if (v == "gaussian") {
      instance.reward_model = RewardModel::GaussianUnitVariance;
    } else if (v == "bernoulli") {
      instance.reward_model = RewardModel::BernoulliLike;
    } else {
      throw ValidationError("reward_model", "expected gaussian or bernoulli");
    }
  } else if (config.algorithm == Algorithm::Bbsea) {
    instance.reward_model = RewardModel::BernoulliLike;
  }
  if (const Entry* e = find("arm_sets")) {
    std::vector<std::vector<std::size_t>> sets;
    for (const auto& row : parse_matrix(*e, "arm_sets")) {
      std::vector<std::size_t> set;
      for (double v : row) {
        if (!(v >= 1.0) || v != std::floor(v)) {
          throw ValidationError("arm_sets", "arm indices are positive integers");
        }
        set.push_back(static_cast<std::size_t>(v) - 1);
      }
      sets.push_back(std::move(set));
    }
    instance.arm_sets = std::move(sets);
  }

  try {
    config.instance = validate(std::move(instance));
  } catch (const RowNotStochastic& e) {
    throw ValidationError("q", e.what());
  } catch (const DimensionMismatch& e) {
    throw ValidationError("q", e.what());
  } catch (const TiedBestArm& e) {
    throw ValidationError("mu", e.what());
  } catch (const PartitionViolation& e) {
    throw ValidationError("arm_sets", e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError("mu", e.what());
  }

  config.delta_grid = parse_vector(require("delta_grid"), "delta_grid");
  if (config.delta_grid.empty()) throw ValidationError("delta_grid", "empty");
  for (std::size_t i = 0; i < config.delta_grid.size(); ++i) {
    const double d = config.delta_grid[i];
    if (!(d > 0.0 && d < 1.0)) throw ValidationError("delta_grid", "values must lie in (0, 1)");
    if (i > 0 && !(d < config.delta_grid[i - 1])) {
      throw ValidationError("delta_grid", "values must be strictly descending");
    }
  }

  if (const Entry* e = find("rho")) {
    config.rho = parse_double(*e);
    if (!(*config.rho > 0.0)) throw ValidationError("rho", "must be positive");
  }
  if (config.algorithm == Algorithm::Bbmts) {
    if (!config.rho) throw ValidationError("rho", "missing");
    if (config.instance->num_arms() < 2) throw ValidationError("mu", "need at least two arms");
    if (config.instance->reward_model() != RewardModel::GaussianUnitVariance) {
      throw ValidationError("reward_model", "bbmts needs gaussian rewards");
    }
  } else if (!config.instance->is_partition()) {
    throw ValidationError("arm_sets", "bbsea needs a partition");
  }

  if (const Entry* e = find("trials")) config.trials = parse_count(*e, "trials");
  if (config.trials < 1) throw ValidationError("trials", "must be at least 1");
  if (const Entry* e = find("base_seed")) config.base_seed = parse_count(*e, "base_seed");
  if (const Entry* e = find("max_steps")) {
    config.max_steps = parse_count(*e, "max_steps");
    if (config.max_steps == 0) throw ValidationError("max_steps", "must be positive");
  }
  if (const Entry* e = find("threshold")) {
    const auto v = lower(e->value);
    if (v == "paper") {
      config.threshold_mode = ThresholdMode::Paper;
    } else if (v == "practical") {
      config.threshold_mode = ThresholdMode::Practical;
    } else {
      throw ValidationError("threshold", "expected paper or practical");
    }
  }
  if (const Entry* e = find("trace")) {
    const auto v = lower(e->value);
    if (v == "off") {
      config.trace_every = 0;
    } else if (v == "on") {
      config.trace_every = kDefaultTraceEvery;
    } else {
      config.trace_every = parse_count(*e, "trace");
    }
  }
  if (const Entry* e = find("resolve")) {
    const auto v = lower(e->value);
    if (v == "strict") {
      config.resolve = ResolveMode::Strict;
    } else if (v == "thinned") {
      config.resolve = ResolveMode::Thinned;
    } else {
      throw ValidationError("resolve", "expected strict or thinned");
    }
  }
  if (const Entry* e = find("wstar_selection")) {
    const auto v = lower(e->value);
    if (v == "solver") {
      config.selection = WstarSelection::Solver;
    } else if (v == "first") {
      config.selection = WstarSelection::TowardFirst;
    } else if (v == "last") {
      config.selection = WstarSelection::TowardLast;
    } else {
      throw ValidationError("wstar_selection", "expected solver, first or last");
    }
  }
  if (const Entry* e = find("stopping")) config.stopping = parse_switch(*e, "stopping");
  if (const Entry* e = find("solver_tol")) {
    config.solver_tol = parse_double(*e);
    if (!(config.solver_tol > 0.0)) throw ValidationError("solver_tol", "must be positive");
  }
  if (const Entry* e = find("output")) config.output_path = e->value;
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

bool ExperimentResult::any_capped() const {
  return std::any_of(trials.begin(), trials.end(), [](const TrialRow& r) { return r.capped; });
}

namespace {

TrialRow run_trial(const ExperimentConfig& config, double delta, std::uint64_t seed,
                   const TrueInstanceReference* reference) {
  const ValidatedInstance& instance = *config.instance;
  TrialRow row;
  row.seed = seed;
  row.delta = delta;
  try {
    RunOutcome outcome;
    if (config.algorithm == Algorithm::Bbmts) {
      BbmtsOptions options;
      options.delta = delta;
      options.rho = config.rho.value_or(1.0);
      options.threshold_mode = config.threshold_mode;
      options.resolve = config.resolve;
      options.selection = config.selection;
      options.max_steps = config.effective_max_steps();
      options.stopping = config.stopping;
      options.trace_every = config.trace_every;
      options.solver_tol = config.solver_tol;
      outcome = run_bbmts(instance, options, seed, reference);
    } else {
      BbseaOptions options;
      options.delta = delta;
      options.max_steps = config.effective_max_steps();
      outcome = run_bbsea(instance, options, seed);
    }
    row.tau = outcome.tau;
    row.declared = outcome.declared_arm;
    row.correct = outcome.correct;
    row.final_tracking_distance = outcome.final_tracking_distance;
    row.trace = std::move(outcome.trace);
  } catch (const CapExceeded& e) {
    row.tau = e.max_steps();
    row.capped = true;
    row.correct = false;
  }
  return row;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("NA");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
  if (!config.instance) throw ValidationError("q", "no instance");
  std::optional<TrueInstanceReference> reference;
  if (config.algorithm == Algorithm::Bbmts) reference = make_reference(*config.instance);

  const std::size_t per_delta = config.trials;
  const std::size_t total = per_delta * config.delta_grid.size();
  ExperimentResult result;
  result.trials.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        const double delta = config.delta_grid[i / per_delta];
        const std::uint64_t seed = config.base_seed + i % per_delta;
        result.trials[i] =
            run_trial(config, delta, seed, reference ? &*reference : nullptr);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, total));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  const std::optional<double> t_star =
      reference ? std::optional<double>(reference->solution.t_star) : std::nullopt;
  for (std::size_t d = 0; d < config.delta_grid.size(); ++d) {
    std::vector<TrialRow> rows(result.trials.begin() + static_cast<std::ptrdiff_t>(d * per_delta),
                               result.trials.begin() +
                                   static_cast<std::ptrdiff_t>((d + 1) * per_delta));
    std::sort(rows.begin(), rows.end(),
              [](const TrialRow& a, const TrialRow& b) { return a.seed < b.seed; });
    result.aggregates.push_back(aggregate(config, config.delta_grid[d], rows, t_star));
  }
  return result;
}

AggregateRow aggregate(const ExperimentConfig& config, double delta,
                       const std::vector<TrialRow>& rows, std::optional<double> t_star) {
  AggregateRow out;
  out.delta = delta;
  out.trials = rows.size();
  if (rows.empty()) return out;
  const auto n = static_cast<double>(rows.size());
  double errors = 0.0;
  double tau_sum = 0.0;
  double tracking_sum = 0.0;
  std::size_t tracking_count = 0;
  for (const auto& r : rows) {
    if (!r.correct) errors += 1.0;
    tau_sum += static_cast<double>(r.tau);
    if (r.capped) ++out.capped;
    if (r.final_tracking_distance) {
      tracking_sum += *r.final_tracking_distance;
      ++tracking_count;
    }
  }
  out.error_rate = errors / n;
  out.mean_tau = tau_sum / n;
  double squares = 0.0;
  for (const auto& r : rows) {
    const double d = static_cast<double>(r.tau) - out.mean_tau;
    squares += d * d;
  }
  out.stddev_tau = rows.size() > 1 ? std::sqrt(squares / (n - 1.0)) : 0.0;
  out.mean_tau_over_log1delta = out.mean_tau / std::log(1.0 / delta);
  if (config.algorithm == Algorithm::Bbmts) {
    out.t_star = t_star;
    if (tracking_count > 0) {
      out.mean_final_tracking_distance = tracking_sum / static_cast<double>(tracking_count);
    }
  } else {
    if (2.4 * delta < 1.0) {
      const auto bounds = theory_bounds(*config.instance, delta);
      out.bounds = std::make_pair(bounds.upper_bound, bounds.lower_bound);
    }
  }
  return out;
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 6);
  if (ec != std::errc()) return "nan";
  return {buffer, ptr};
}

Summary emit_summary(const std::vector<AggregateRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("summary needs at least one row");
  const std::vector<std::string> header = {"delta",    "trials",     "error_rate",
                                           "mean_tau", "stddev_tau", "slope",
                                           "t_star_or_bounds", "tracking_distance"};
  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const auto& r : rows) {
    std::string star_or_bounds = "NA";
    if (r.t_star) {
      star_or_bounds = format_number(*r.t_star);
    } else if (r.bounds) {
      star_or_bounds = format_number(r.bounds->first) + ";" + format_number(r.bounds->second);
    }
    cells.push_back({format_number(r.delta), std::to_string(r.trials), format_number(r.error_rate),
                     format_number(r.mean_tau), format_number(r.stddev_tau),
                     format_number(r.mean_tau_over_log1delta), star_or_bounds,
                     optional_number(r.mean_final_tracking_distance)});
  }

  Summary out;
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
  }
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) {
        out.csv += ',';
        out.table += "  ";
      }
      out.csv += line[c];
      out.table += std::string(widths[c] - line[c].size(), ' ') + line[c];
    }
    out.csv += '\n';
    out.table += '\n';
  }
  return out;
}

std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::string out = "seed,delta,tau,declared,correct,final_tracking_distance,capped\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + ',' + format_number(r.delta) + ',' + std::to_string(r.tau) +
           ',' + (r.declared ? std::to_string(*r.declared + 1) : std::string("NA")) + ',' +
           (r.correct ? "1" : "0") + ',' + optional_number(r.final_tracking_distance) + ',' +
           (r.capped ? "1" : "0") + '\n';
  }
  return out;
}

std::string trace_csv(const std::vector<TrialRow>& rows) {
  std::string out = "delta,seed,t,tracking_distance,z,zeta\n";
  for (const auto& r : rows) {
    for (const auto& p : r.trace) {
      out += format_number(r.delta) + ',' + std::to_string(r.seed) + ',' + std::to_string(p.t) +
             ',' + format_number(p.tracking_distance) + ',' + format_number(p.z) + ',' +
             format_number(p.zeta) + '\n';
    }
  }
  return out;
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
  };
  write("trials.csv", trials_csv(result.trials));
  write("summary.csv", emit_summary(result.aggregates).csv);
  const bool traced = std::any_of(result.trials.begin(), result.trials.end(),
                                  [](const TrialRow& r) { return !r.trace.empty(); });
  if (traced) write("trace.csv", trace_csv(result.trials));
}

}  // namespace boxbai
