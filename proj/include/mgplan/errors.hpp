// Copyright 2026 The mgplan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGPLAN_ERRORS_HPP_
#define MGPLAN_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace mgplan {

/// Model validation failure. Collects every violated invariant so authoring
/// bugs surface in one pass; each violation string starts with its kind
/// (NonstochasticRow, RewardOutOfRange, DiscountOutOfRange, DanglingSuccessor,
/// DuplicateEntry, MissingTriple, ...).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(std::vector<std::string> violations)
      : std::runtime_error(Join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string Join(const std::vector<std::string>& violations) {
    std::string msg = "model validation failed:";
    for (const auto& v : violations) msg += "\n  " + v;
    return msg;
  }

  std::vector<std::string> violations_;
};

/// Shape disagreement between a model and a policy/value argument.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scalar argument outside its documented range (ParameterOutOfRange).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: simplex pivot cap exceeded, singular linear system,
/// or an exceeded internal iteration guard.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Feature matrix rank below the required dimension (RankDeficient).
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File read/write/parse failure; message carries the path and, for JSON
/// parse errors, the byte position diagnostics from the parser.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mgplan

#endif  // MGPLAN_ERRORS_HPP_
