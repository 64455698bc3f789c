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
//
// Exact solution of the two-player zero-sum matrix game max_mu min_nu
// mu' A nu by linear programming (dense primal simplex), plus best-response
// evaluation against a fixed row mixture.

#ifndef MGPLAN_MATRIX_GAME_HPP_
#define MGPLAN_MATRIX_GAME_HPP_

#include <Eigen/Dense>

namespace mgplan {

/// Minimax solution of a payoff matrix (rows = maximizer actions).
/// value = row_strategy' A col_strategy; row_strategy guarantees at least
/// value against every pure column, col_strategy concedes at most value
/// against every pure row (within 1e-9). duality_gap is the absolute
/// difference between the maximizer-side and minimizer-side LP values and is
/// a numerical health indicator, not an approximation knob.
struct MatrixGameSolution {
  double value;
  Eigen::VectorXd row_strategy;
  Eigen::VectorXd col_strategy;
  double duality_gap;
};

/// Solves the matrix game by the standard minimax LP: payoffs are shifted
/// positive, the minimizer-side LP  max 1'z  s.t.  A z <= 1, z >= 0  is
/// solved by primal simplex from the slack basis with Bland's rule
/// (lowest-index entering column; ratio ties broken by lowest basic-variable
/// index), and the maximizer strategy is read off the optimal duals. The
/// pivot rule makes the returned vertex deterministic.
///
/// Throws ParameterError on an empty or non-finite matrix and NumericalError
/// if the simplex exceeds its 50*(rows+cols) pivot cap.
MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& payoff);

struct BestResponse {
  double value;  // min over columns of row_strategy' A e_j
  int column;    // minimizing column, ties broken by lowest index
};

/// Best pure-column response of the minimizer against a fixed row mixture.
/// Throws DimensionError if row_strategy does not match the row count.
BestResponse best_response_value(const Eigen::MatrixXd& payoff,
                                 const Eigen::VectorXd& row_strategy);

}  // namespace mgplan

#endif  // MGPLAN_MATRIX_GAME_HPP_
