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

#ifndef BOXBAI_ERRORS_HPP
#define BOXBAI_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace boxbai {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A row of the box-to-arm matrix is not a probability vector.
class RowNotStochastic : public Error {
 public:
  explicit RowNotStochastic(std::size_t row);
  [[nodiscard]] std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Two or more arms share the largest mean.
class TiedBestArm : public Error {
 public:
  explicit TiedBestArm(std::size_t arm);
  [[nodiscard]] std::size_t arm() const noexcept { return arm_; }

 private:
  std::size_t arm_;
};

/// Arm sets are not a partition of the arms consistent with the support of q.
class PartitionViolation : public Error {
 public:
  PartitionViolation(std::size_t index, const std::string& what);
  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual);
};

/// The characteristic-time maximization did not certify its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(std::size_t iterations, double residual);
  [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// An empirical mean or box distribution was requested before any sample.
class UndefinedEstimate : public Error {
 public:
  explicit UndefinedEstimate(std::size_t index);
};

class NoFiniteC : public Error {
 public:
  NoFiniteC(std::size_t num_arms, double rho);
};

class NonpositiveGap : public Error {
 public:
  explicit NonpositiveGap(double gap);
};

/// A run hit its selection budget without stopping.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(std::uint64_t max_steps);
  [[nodiscard]] std::uint64_t max_steps() const noexcept { return max_steps_; }

 private:
  std::uint64_t max_steps_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what);
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace boxbai

#endif  // BOXBAI_ERRORS_HPP
