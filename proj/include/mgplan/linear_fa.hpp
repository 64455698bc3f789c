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
// Least-squares function-approximation policy iteration over an anchor state
// set D: value estimates live in span(Phi), each iteration fits theta to the
// composite backup T^m_{mu,nu} T^{H-1}(Phi theta) at the anchors. Includes
// the projection-operator diagnostics (delta_FV, delta_app, kappa).

#ifndef MGPLAN_LINEAR_FA_HPP_
#define MGPLAN_LINEAR_FA_HPP_

#include <optional>
#include <span>
#include <vector>

#include "mgplan/bellman.hpp"
#include "mgplan/game.hpp"
#include "mgplan/planners.hpp"

namespace mgplan {

/// State features Phi (|S| x d, rows are per-state feature vectors) and the
/// ordered anchor subset D. Valid schemes have |D| >= d and rank(Phi_D) = d.
struct StateFeatureScheme {
  Eigen::MatrixXd phi;
  std::vector<int> anchors;
};

/// M = Phi (Phi_D' Phi_D)^{-1} Phi_D' P where P selects the anchor rows;
/// M Phi theta = Phi theta for every theta (projection onto span(Phi) that
/// interpolates at the anchors). delta_fv = ||M||_inf.
struct ProjectionOperator {
  Eigen::MatrixXd m_matrix;
  double delta_fv;
};

/// Rate and asymptotic-error report for the function-approximation bound.
/// kappa_fa = alpha^{H-1} + (delta_fv alpha^{m+H-1} + alpha^{H-1})(1+alpha)/
/// (1-alpha); with delta_fv = 1 this coincides with the tabular rate.
/// asymptotic_bound = delta_app_estimate/(1-kappa_fa), defined only when
/// kappa_fa < 1 (valid flag); delta_app_estimate is an empirical lower
/// estimate taken over the policies actually visited, never a certified sup.
struct FaBoundReport {
  double kappa_fa;
  double delta_app_estimate;
  double asymptotic_bound;
  bool valid;
};

/// Builds the projection operator. Rank is checked numerically: all d
/// singular values of Phi_D must exceed 1e-10, else RankError
/// ("RankDeficient"). Anchors must be distinct valid states with |D| >= d.
ProjectionOperator build_projection(const StateFeatureScheme& scheme);

/// The function-approximation rate kappa for (alpha, m, H, delta_fv).
double kappa_fa(double alpha, Depth m, int h, double delta_fv);

/// One least-squares PI step: theta' = argmin_theta sum_{s in D}
/// (J_hat(s) - phi(s)'theta)^2 with J_hat = composite_tmh(Phi theta_k, m, H).
/// Solved by normal equations (rank already certified by build_projection);
/// equivalently Phi theta' = M J_hat.
Eigen::VectorXd fa_pi_step(const GameModel& game, const StateFeatureScheme& scheme,
                           const ProjectionOperator& proj,
                           const Eigen::VectorXd& theta, Depth m, int h);

struct FaOptions {
  std::optional<Value> reference;  // J* for trace sup_error columns
  bool strict = false;             // throw when kappa_fa >= 1
};

struct FaRunResult {
  std::vector<Eigen::VectorXd> theta_trace;  // theta_0 .. theta_K
  FaBoundReport bound;
  ConvergenceTrace trace;
  std::vector<PolicyPair> visited_policies;  // lookahead policy of each step
};

/// Runs exactly `iterations` steps of fa_pi_step, recording the visited
/// lookahead policies, per-iteration Bellman residuals of Phi theta_k, and
/// the bound report with delta_app estimated over the visited policies.
FaRunResult fa_pi(const GameModel& game, const StateFeatureScheme& scheme,
                  const Eigen::VectorXd& theta0, Depth m, int h, int iterations,
                  const FaOptions& options = {});

/// Empirical lower estimate of delta_app: max over the given policies of
/// ||J^{mu,nu} - M J^{mu,nu}||_inf (exact policy values; joint-policy value
/// by design). Empty input gives the trivial estimate 0.
double estimate_delta_app(const GameModel& game, const ProjectionOperator& proj,
                          std::span<const PolicyPair> policies);

}  // namespace mgplan

#endif  // MGPLAN_LINEAR_FA_HPP_
