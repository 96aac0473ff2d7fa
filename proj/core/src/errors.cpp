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

#include "boxbai/errors.hpp"

#include <string>

namespace boxbai {

namespace {

std::string index_message(const char* what, std::size_t index) {
  return std::string(what) + " (index " + std::to_string(index) + ")";
}

}  // namespace

RowNotStochastic::RowNotStochastic(std::size_t row)
    : Error(index_message("row of q is not a probability vector", row)), row_(row) {}

TiedBestArm::TiedBestArm(std::size_t arm)
    : Error(index_message("best arm is not unique; tie at arm", arm)), arm_(arm) {}

PartitionViolation::PartitionViolation(std::size_t index, const std::string& what)
    : Error(index_message(("arm sets violate partition: " + what).c_str(), index)),
      index_(index) {}

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(actual)) {}

NonConvergence::NonConvergence(std::size_t iterations, double residual)
    : Error("characteristic-time solver stalled after " + std::to_string(iterations) +
            " iterations with residual " + std::to_string(residual)),
      iterations_(iterations),
      residual_(residual) {}

UndefinedEstimate::UndefinedEstimate(std::size_t index)
    : Error(index_message("estimate undefined: no samples", index)) {}

NoFiniteC::NoFiniteC(std::size_t num_arms, double rho)
    : Error("no finite threshold constant for K=" + std::to_string(num_arms) +
            ", rho=" + std::to_string(rho)) {}

NonpositiveGap::NonpositiveGap(double gap)
    : Error("sub-optimality gap must be positive, got " + std::to_string(gap)) {}

CapExceeded::CapExceeded(std::uint64_t max_steps)
    : Error("run did not stop within " + std::to_string(max_steps) + " box selections"),
      max_steps_(max_steps) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& what)
    : Error("invalid '" + field + "': " + what), field_(std::move(field)) {}

}  // namespace boxbai
