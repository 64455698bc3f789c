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

#include "mgplan/matrix_game.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mgplan/errors.hpp"

namespace mgplan {
namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kPivotTol = 1e-12;

Eigen::VectorXd ClampedDistribution(Eigen::VectorXd x) {
  // Basic variables are nonnegative up to rounding; clamp stray -1e-17s and
  // renormalize so downstream policy checks see an exact distribution.
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < 0.0) x[i] = 0.0;
  const double total = x.sum();
  if (total <= 0.0) throw NumericalError("simplex produced a zero strategy vector");
  return x / total;
}

}  // namespace

MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& payoff) {
  const int rows = static_cast<int>(payoff.rows());
  const int cols = static_cast<int>(payoff.cols());
  if (rows < 1 || cols < 1)
    throw ParameterError("matrix game needs at least one row and one column");
  if (!payoff.allFinite())
    throw ParameterError("matrix game payoffs must be finite");

  // Shift payoffs to be >= 1 so the game value is strictly positive; the
  // shift is subtracted from the value at the end and leaves optimal
  // strategies unchanged.
  const double lowest = payoff.minCoeff();
  const double shift = lowest < 1.0 ? 1.0 - lowest : 0.0;

  // Minimizer-side LP on z = nu / w:  max 1'z  s.t.  (A + shift) z <= 1,
  // z >= 0, where w is the shifted game value; slack basis is feasible.
  const int width = cols + rows + 1;  // z columns, slack columns, rhs
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, width);
  t.block(0, 0, rows, cols) = payoff.array() + shift;
  t.block(0, cols, rows, rows) = Eigen::MatrixXd::Identity(rows, rows);
  t.block(0, width - 1, rows, 1).setOnes();
  for (int j = 0; j < cols; ++j) t(rows, j) = -1.0;

  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = cols + i;

  const int pivot_cap = 50 * (rows + cols);
  for (int pivots = 0;; ++pivots) {
    if (pivots > pivot_cap)
      throw NumericalError("NumericalFailure: simplex exceeded " +
                           std::to_string(pivot_cap) + " pivots");
    // Bland: lowest-index column with negative reduced cost.
    int entering = -1;
    for (int j = 0; j < width - 1; ++j) {
      if (t(rows, j) < -kReducedCostTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    // Ratio test; ties broken by lowest basic-variable index (Bland).
    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (t(i, entering) <= kPivotTol) continue;
      const double ratio = t(i, width - 1) / t(i, entering);
      if (leaving < 0 || ratio < best_ratio - kPivotTol ||
          (std::abs(ratio - best_ratio) <= kPivotTol && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving < 0)
      throw NumericalError("NumericalFailure: unbounded simplex (corrupt payoffs)");

    t.row(leaving) /= t(leaving, entering);
    for (int i = 0; i <= rows; ++i) {
      if (i == leaving) continue;
      const double factor = t(i, entering);
      if (factor != 0.0) t.row(i) -= factor * t.row(leaving);
    }
    basis[leaving] = entering;
  }

  const double objective = t(rows, width - 1);  // sum of z at optimum
  if (objective <= 0.0)
    throw NumericalError("NumericalFailure: nonpositive simplex objective");

  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < rows; ++i)
    if (basis[i] < cols) z[basis[i]] = t(i, width - 1);
  // Optimal duals live in the reduced costs of the slack columns.
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) y[i] = t(rows, cols + i);
  const double dual_total = y.sum();
  if (dual_total <= 0.0)
    throw NumericalError("NumericalFailure: nonpositive dual total");

  MatrixGameSolution sol;
  sol.col_strategy = ClampedDistribution(std::move(z));
  sol.row_strategy = ClampedDistribution(std::move(y));
  const double minimizer_value = 1.0 / objective - shift;
  const double maximizer_value = 1.0 / dual_total - shift;
  sol.value = minimizer_value;
  sol.duality_gap = std::abs(maximizer_value - minimizer_value);
  return sol;
}

BestResponse best_response_value(const Eigen::MatrixXd& payoff,
                                 const Eigen::VectorXd& row_strategy) {
  if (row_strategy.size() != payoff.rows())
    throw DimensionError("row strategy has " + std::to_string(row_strategy.size()) +
                         " entries, payoff has " + std::to_string(payoff.rows()) +
                         " rows");
  if (payoff.cols() < 1)
    throw ParameterError("matrix game needs at least one column");
  BestResponse best{0.0, -1};
  for (int j = 0; j < payoff.cols(); ++j) {
    const double value = row_strategy.dot(payoff.col(j));
    if (best.column < 0 || value < best.value) {
      best.value = value;
      best.column = j;
    }
  }
  return best;
}

}  // namespace mgplan
