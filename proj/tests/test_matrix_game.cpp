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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mgplan/errors.hpp"
#include "mgplan/rng.hpp"
#include "test_support.hpp"

namespace mgplan_test {
namespace {

Eigen::MatrixXd Mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// Every solution must satisfy the stated guarantees: strategies are
// distributions, the row mixture guarantees the value against every pure
// column, the column mixture concedes at most the value against every pure
// row, and the two LP sides agree.
void CheckSolutionInvariants(const Eigen::MatrixXd& a, const MatrixGameSolution& sol) {
  ASSERT_EQ(sol.row_strategy.size(), a.rows());
  ASSERT_EQ(sol.col_strategy.size(), a.cols());
  EXPECT_NEAR(sol.row_strategy.sum(), 1.0, 1e-10);
  EXPECT_NEAR(sol.col_strategy.sum(), 1.0, 1e-10);
  EXPECT_GE(sol.row_strategy.minCoeff(), -1e-12);
  EXPECT_GE(sol.col_strategy.minCoeff(), -1e-12);
  EXPECT_LE(sol.duality_gap, 1e-9);
  const Eigen::VectorXd guarantee = a.transpose() * sol.row_strategy;
  const Eigen::VectorXd concession = a * sol.col_strategy;
  EXPECT_GE(guarantee.minCoeff(), sol.value - 1e-9);
  EXPECT_LE(concession.maxCoeff(), sol.value + 1e-9);
}

TEST(SolveMatrixGame, MixedValueExample) {
  const Eigen::MatrixXd a = Mat2(3, 1, 0, 2);
  const MatrixGameSolution sol = solve_matrix_game(a);
  EXPECT_NEAR(sol.value, 1.5, 1e-9);
  EXPECT_NEAR(sol.row_strategy(0), 0.5, 1e-9);
  EXPECT_NEAR(sol.row_strategy(1), 0.5, 1e-9);
  EXPECT_NEAR(sol.col_strategy(0), 0.25, 1e-9);
  EXPECT_NEAR(sol.col_strategy(1), 0.75, 1e-9);
  CheckSolutionInvariants(a, sol);
}

TEST(SolveMatrixGame, MatchingPennies) {
  const Eigen::MatrixXd a = Mat2(1, -1, -1, 1);
  const MatrixGameSolution sol = solve_matrix_game(a);
  EXPECT_NEAR(sol.value, 0.0, 1e-9);
  EXPECT_NEAR(sol.row_strategy(0), 0.5, 1e-9);
  EXPECT_NEAR(sol.col_strategy(0), 0.5, 1e-9);
  CheckSolutionInvariants(a, sol);
}

TEST(SolveMatrixGame, OneByOne) {
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  const MatrixGameSolution sol = solve_matrix_game(a);
  EXPECT_NEAR(sol.value, 1.0, 1e-12);
  EXPECT_NEAR(sol.row_strategy(0), 1.0, 1e-12);
  EXPECT_NEAR(sol.col_strategy(0), 1.0, 1e-12);
}

TEST(SolveMatrixGame, PureSaddlePoint) {
  // Row 0 dominates row 1 and column 1 dominates column 0 for the minimizer.
  const Eigen::MatrixXd a = Mat2(2, 1, 0, -1);
  const MatrixGameSolution sol = solve_matrix_game(a);
  EXPECT_NEAR(sol.value, 1.0, 1e-9);
  CheckSolutionInvariants(a, sol);
}

TEST(SolveMatrixGame, WideAndTallMatrices) {
  Eigen::MatrixXd wide(1, 4);
  wide << 4.0, -2.0, 7.0, 0.5;
  const MatrixGameSolution w = solve_matrix_game(wide);
  EXPECT_NEAR(w.value, -2.0, 1e-9);  // minimizer picks the smallest column
  CheckSolutionInvariants(wide, w);

  Eigen::MatrixXd tall(4, 1);
  tall << 4.0, -2.0, 7.0, 0.5;
  const MatrixGameSolution t = solve_matrix_game(tall);
  EXPECT_NEAR(t.value, 7.0, 1e-9);  // maximizer picks the largest row
  CheckSolutionInvariants(tall, t);
}

TEST(SolveMatrixGame, ConstantMatrix) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(3, 2, -1.25);
  const MatrixGameSolution sol = solve_matrix_game(a);
  EXPECT_NEAR(sol.value, -1.25, 1e-9);
  CheckSolutionInvariants(a, sol);
}

TEST(SolveMatrixGame, ShiftCovariance) {
  Rng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 1 + rng.uniform_int(4);
    const int n = 1 + rng.uniform_int(4);
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-5.0, 5.0);
    const double c = rng.uniform(-10.0, 10.0);
    const MatrixGameSolution base = solve_matrix_game(a);
    const MatrixGameSolution shifted =
        solve_matrix_game(a + Eigen::MatrixXd::Constant(m, n, c));
    EXPECT_NEAR(shifted.value, base.value + c, 1e-8);
  }
}

TEST(SolveMatrixGame, Determinism) {
  const Eigen::MatrixXd a = Mat2(1, 1, 1, 1);  // fully degenerate ties
  const MatrixGameSolution s1 = solve_matrix_game(a);
  const MatrixGameSolution s2 = solve_matrix_game(a);
  EXPECT_EQ(s1.value, s2.value);
  EXPECT_EQ((s1.row_strategy - s2.row_strategy).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ((s1.col_strategy - s2.col_strategy).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(SolveMatrixGame, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(solve_matrix_game(Eigen::MatrixXd()), ParameterError);
  Eigen::MatrixXd nan = Mat2(1, 2, 3, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(solve_matrix_game(nan), ParameterError);
  Eigen::MatrixXd inf = Mat2(1, 2, 3, std::numeric_limits<double>::infinity());
  EXPECT_THROW(solve_matrix_game(inf), ParameterError);
}

TEST(SolveMatrixGame, AgreesWithSupportEnumerationOracle) {
  Rng rng(7);
  for (int rep = 0; rep < 300; ++rep) {
    const int m = 1 + rng.uniform_int(4);
    const int n = 1 + rng.uniform_int(4);
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-5.0, 5.0);
    const MatrixGameSolution sol = solve_matrix_game(a);
    const OracleSolution oracle = SupportEnumerationSolve(a);
    EXPECT_NEAR(sol.value, oracle.value, 1e-8)
        << "seeded matrix " << rep << ":\n" << a;
    CheckSolutionInvariants(a, sol);
  }
}

TEST(BestResponse, TiePrefersLowestColumn) {
  const Eigen::MatrixXd a = Mat2(3, 1, 0, 2);
  Eigen::VectorXd mix(2);
  mix << 0.5, 0.5;
  const BestResponse br = best_response_value(a, mix);
  EXPECT_NEAR(br.value, 1.5, 1e-12);  // both columns pay 1.5; tie -> column 0
  EXPECT_EQ(br.column, 0);
}

TEST(BestResponse, PureRowExample) {
  const Eigen::MatrixXd a = Mat2(3, 1, 0, 2);
  Eigen::VectorXd mix(2);
  mix << 1.0, 0.0;
  const BestResponse br = best_response_value(a, mix);
  EXPECT_NEAR(br.value, 1.0, 1e-12);
  EXPECT_EQ(br.column, 1);
}

TEST(BestResponse, OptimalMixGuaranteesGameValue) {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 1 + rng.uniform_int(4);
    const int n = 1 + rng.uniform_int(4);
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-5.0, 5.0);
    const MatrixGameSolution sol = solve_matrix_game(a);
    const BestResponse br = best_response_value(a, sol.row_strategy);
    EXPECT_NEAR(br.value, sol.value, 1e-8);
  }
}

TEST(BestResponse, RejectsDimensionMismatch) {
  const Eigen::MatrixXd a = Mat2(3, 1, 0, 2);
  EXPECT_THROW(best_response_value(a, Eigen::VectorXd::Constant(3, 1.0 / 3)),
               DimensionError);
}

}  // namespace
}  // namespace mgplan_test
