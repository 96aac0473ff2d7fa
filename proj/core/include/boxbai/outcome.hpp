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

#ifndef BOXBAI_OUTCOME_HPP
#define BOXBAI_OUTCOME_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace boxbai {

/// One sampled point of a run's diagnostic time series.
struct TracePoint {
  std::uint64_t t = 0;
  double tracking_distance = 0.0;
  double z = 0.0;
  double zeta = 0.0;
};

/// Result of one run of an identification algorithm.
struct RunOutcome {
  std::size_t declared_arm = 0;
  std::uint64_t tau = 0;  ///< box selections made
  bool correct = false;
  /// False when the run was driven to a fixed horizon with stopping disabled.
  bool stopped = true;
  std::optional<double> final_tracking_distance;
  std::vector<TracePoint> trace;
};

}  // namespace boxbai

#endif  // BOXBAI_OUTCOME_HPP
