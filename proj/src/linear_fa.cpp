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

#include "mgplan/linear_fa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

namespace mgplan {
namespace {

constexpr double kRankTol = 1e-10;

Eigen::MatrixXd AnchorRows(const StateFeatureScheme& scheme) {
  Eigen::MatrixXd phi_d(scheme.anchors.size(), scheme.phi.cols());
  for (std::size_t i = 0; i < scheme.anchors.size(); ++i)
    phi_d.row(i) = scheme.phi.row(scheme.anchors[i]);
  return phi_d;
}

void CheckScheme(const GameModel& game, const StateFeatureScheme& scheme) {
  if (scheme.phi.rows() != game.num_states())
    throw DimensionError("feature matrix has " + std::to_string(scheme.phi.rows()) +
                         " rows, game has " + std::to_string(game.num_states()) +
                         " states");
  if (scheme.phi.cols() < 1) throw ParameterError("feature dimension d must be >= 1");
  if (scheme.anchors.empty()) throw ParameterError("anchor set must be nonempty");
  std::set<int> seen;
  for (int s : scheme.anchors) {
    if (s < 0 || s >= game.num_states())
      throw ParameterError("anchor state " + std::to_string(s) + " out of range");
    if (!seen.insert(s).second)
      throw ParameterError("anchor state " + std::to_string(s) + " repeated");
  }
  if (static_cast<Eigen::Index>(scheme.anchors.size()) < scheme.phi.cols())
    throw RankError("RankDeficient: |D| = " + std::to_string(scheme.anchors.size()) +
                    " anchors cannot span d = " + std::to_string(scheme.phi.cols()));
}

// Rank gate shared by build_projection and the solvers: all d singular
// values of Phi_D must clear kRankTol.
void CheckRank(const Eigen::MatrixXd& phi_d) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi_d);
  if (svd.singularValues().size() < phi_d.cols() ||
      svd.singularValues().minCoeff() <= kRankTol)
    throw RankError("RankDeficient: Phi_D has numerical rank below d (threshold " +
                    std::to_string(kRankTol) + ")");
}

}  // namespace

ProjectionOperator build_projection(const StateFeatureScheme& scheme) {
  if (scheme.phi.rows() < 1 || scheme.phi.cols() < 1)
    throw ParameterError("feature matrix must be nonempty");
  std::set<int> seen;
  for (int s : scheme.anchors) {
    if (s < 0 || s >= scheme.phi.rows())
      throw ParameterError("anchor state " + std::to_string(s) + " out of range");
    if (!seen.insert(s).second)
      throw ParameterError("anchor state " + std::to_string(s) + " repeated");
  }
  if (scheme.anchors.empty() ||
      static_cast<Eigen::Index>(scheme.anchors.size()) < scheme.phi.cols())
    throw RankError("RankDeficient: need at least d anchors");
  const Eigen::MatrixXd phi_d = AnchorRows(scheme);
  CheckRank(phi_d);

  const int n = static_cast<int>(scheme.phi.rows());
  const Eigen::MatrixXd gram = phi_d.transpose() * phi_d;
  // K = (Phi_D' Phi_D)^{-1} Phi_D'; M's nonzero columns sit at the anchors.
  const Eigen::MatrixXd k = gram.ldlt().solve(phi_d.transpose());
  const Eigen::MatrixXd phi_k = scheme.phi * k;  // |S| x |D|
  ProjectionOperator proj;
  proj.m_matrix = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < scheme.anchors.size(); ++j)
    proj.m_matrix.col(scheme.anchors[j]) += phi_k.col(j);
  proj.delta_fv = proj.m_matrix.cwiseAbs().rowwise().sum().maxCoeff();
  return proj;
}

double kappa_fa(double alpha, Depth m, int h, double delta_fv) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("ParameterOutOfRange: alpha must lie in (0,1)");
  if (h < 1) throw ParameterError("ParameterOutOfRange: H must be >= 1");
  if (delta_fv < 0.0) throw ParameterError("ParameterOutOfRange: delta_fv < 0");
  const double alpha_h1 = std::pow(alpha, h - 1);
  const double alpha_mh1 = m.alpha_pow(alpha) * alpha_h1;  // alpha^{m+H-1}
  return alpha_h1 + (delta_fv * alpha_mh1 + alpha_h1) * (1.0 + alpha) / (1.0 - alpha);
}

namespace {

struct FaStep {
  Eigen::VectorXd theta;
  PolicyPair policy;
  double residual;  // ||T(Phi theta_k) - Phi theta_k||_inf
};

FaStep FaStepImpl(const GameModel& game, const StateFeatureScheme& scheme,
                  const Eigen::MatrixXd& phi_d, const Eigen::VectorXd& theta,
                  Depth m, int h) {
  const Value v = scheme.phi * theta;
  const LookaheadResult look = lookahead(game, v, h);
  const Value j_hat = rollout(game, look.policy, look.backed_value, m);
  Eigen::VectorXd target(scheme.anchors.size());
  for (std::size_t i = 0; i < scheme.anchors.size(); ++i)
    target[i] = j_hat[scheme.anchors[i]];
  FaStep step;
  step.theta = (phi_d.transpose() * phi_d).ldlt().solve(phi_d.transpose() * target);
  step.policy = look.policy;
  step.residual = sup_dist(look.one_step, v);
  return step;
}

}  // namespace

Eigen::VectorXd fa_pi_step(const GameModel& game, const StateFeatureScheme& scheme,
                           const ProjectionOperator& proj,
                           const Eigen::VectorXd& theta, Depth m, int h) {
  CheckScheme(game, scheme);
  if (theta.size() != scheme.phi.cols())
    throw DimensionError("theta has " + std::to_string(theta.size()) +
                         " entries, features have d = " +
                         std::to_string(scheme.phi.cols()));
  (void)proj;  // construction certified the rank condition
  return FaStepImpl(game, scheme, AnchorRows(scheme), theta, m, h).theta;
}

FaRunResult fa_pi(const GameModel& game, const StateFeatureScheme& scheme,
                  const Eigen::VectorXd& theta0, Depth m, int h, int iterations,
                  const FaOptions& options) {
  CheckScheme(game, scheme);
  if (theta0.size() != scheme.phi.cols())
    throw DimensionError("theta0 has " + std::to_string(theta0.size()) +
                         " entries, features have d = " +
                         std::to_string(scheme.phi.cols()));
  if (iterations < 0) throw ParameterError("iterations must be >= 0");
  const ProjectionOperator proj = build_projection(scheme);
  const double kappa = kappa_fa(game.discount(), m, h, proj.delta_fv);
  if (options.strict && !(kappa < 1.0))
    throw ParameterError("AssumptionViolated: kappa_fa = " + std::to_string(kappa) +
                         " >= 1 for this (m,H,delta_fv)");
  const Eigen::MatrixXd phi_d = AnchorRows(scheme);

  FaRunResult result;
  result.theta_trace.push_back(theta0);
  Eigen::VectorXd theta = theta0;
  for (int k = 0; k < iterations; ++k) {
    FaStep step = FaStepImpl(game, scheme, phi_d, theta, m, h);
    TraceRow row;
    row.iter = k;
    row.bellman_residual = step.residual;
    if (options.reference) {
      row.sup_error = sup_dist(scheme.phi * theta, *options.reference);
      if (!result.trace.rows.empty() && result.trace.rows.back().sup_error &&
          *result.trace.rows.back().sup_error > 0.0)
        row.ratio = *row.sup_error / *result.trace.rows.back().sup_error;
    }
    result.trace.rows.push_back(std::move(row));
    result.visited_policies.push_back(std::move(step.policy));
    theta = std::move(step.theta);
    result.theta_trace.push_back(theta);
  }
  result.trace.termination = "completed";

  result.bound.kappa_fa = kappa;
  result.bound.delta_app_estimate =
      estimate_delta_app(game, proj, result.visited_policies);
  result.bound.valid = kappa < 1.0;
  result.bound.asymptotic_bound =
      result.bound.valid ? result.bound.delta_app_estimate / (1.0 - kappa)
                         : std::numeric_limits<double>::infinity();
  return result;
}

double estimate_delta_app(const GameModel& game, const ProjectionOperator& proj,
                          std::span<const PolicyPair> policies) {
  double worst = 0.0;
  for (const PolicyPair& pol : policies) {
    const Value j = exact_policy_value(game, pol);
    worst = std::max(worst, sup_dist(j, proj.m_matrix * j));
  }
  return worst;
}

}  // namespace mgplan
