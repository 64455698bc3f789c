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
// Linear Markov games: rewards and transition kernels linear in state-action
// features, g(s,u,v) = phi(s,u,v)'theta and P(.|s,u,v) = eta phi(s,u,v).
// Local payoff matrices of any value estimate are then representable as
// A_{V,s}(u,v) = phi(s,u,v)'beta, so planning iterates d-dimensional beta
// weights: backups are evaluated at an anchor triple set D and refit by
// least squares. Includes the per-iteration computation-cost model.

#ifndef MGPLAN_LINEAR_GAME_HPP_
#define MGPLAN_LINEAR_GAME_HPP_

#include <optional>
#include <vector>

#include "mgplan/bellman.hpp"
#include "mgplan/game.hpp"
#include "mgplan/planners.hpp"

namespace mgplan {

struct TripleKey {
  int s, u, v;
};

/// Raw linear-model description as parsed from a linear-model file. The
/// feature list must cover every valid (s,u,v) exactly once.
struct LinearGameDescription {
  int num_states = 0;
  double discount = 0.0;
  std::vector<int> actions_max, actions_min;
  int dim = 0;                       // d
  std::vector<std::pair<TripleKey, Eigen::VectorXd>> features;
  Eigen::VectorXd theta;             // reward weights
  Eigen::MatrixXd eta;               // |S| x d transition weights
  std::vector<TripleKey> anchors;    // anchor tuple set D
};

/// Validated linear Markov game. Construction checks that every induced
/// transition row eta phi(s,u,v) is a distribution within 1e-10 (tiny
/// negative entries are clamped to zero, exact zeros are dropped so reach
/// sets equal supports), builds the induced tabular base game for oracle
/// checks, and certifies that the anchor features span R^d.
class LinearGameModel {
 public:
  static LinearGameModel FromDescription(const LinearGameDescription& desc);

  const GameModel& base() const { return *base_; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& feature(int s, int u, int v) const {
    return features_[base_->triple_index(s, u, v)];
  }
  const Eigen::VectorXd& feature_at(int t) const { return features_[t]; }
  const Eigen::VectorXd& reward_weights() const { return theta_; }
  const Eigen::MatrixXd& transition_weights() const { return eta_; }
  const std::vector<TripleKey>& anchors() const { return anchors_; }

  /// Sum over anchors of |R(s,u,v)| (matrix-game-count bookkeeping).
  long long anchor_reach_sum() const;

  /// Exact beta parameterization of A_{V,.}: beta = theta + alpha eta' V.
  /// In particular beta_for_value(0) = theta.
  Eigen::VectorXd beta_for_value(const Value& v) const;

 private:
  LinearGameModel() = default;
  std::optional<GameModel> base_;  // engaged by FromDescription
  int dim_ = 0;
  std::vector<Eigen::VectorXd> features_;
  Eigen::VectorXd theta_;
  Eigen::MatrixXd eta_;
  std::vector<TripleKey> anchors_;
};

/// Local payoff matrix at state s under beta: A(u,v) = phi(s,u,v)'beta.
Eigen::MatrixXd assemble_local_matrix(const LinearGameModel& lg,
                                      const Eigen::VectorXd& beta, int s);

enum class BackupMode { kBellman, kPolicy };

/// One beta-space backup: evaluates A_{T V, s}(u,v) = g(s,u,v) +
/// alpha sum_{s' in R} P(s'|s,u,v) z(s') at the anchor tuples and refits
/// beta' by least squares over the anchor features. z(s') is the maximin
/// value of the local matrix under beta (kBellman) or the frozen policy's
/// bilinear value mu(s')' A_beta(s') nu(s') (kPolicy; pol required). For an
/// exactly linear model the target is representable, so the fit residual is
/// zero up to rounding. games_solved, when given, accumulates the distinct
/// local matrix games solved (kBellman only; values are cached per state
/// within the pass).
Eigen::VectorXd beta_backup(const LinearGameModel& lg, const Eigen::VectorXd& beta,
                            BackupMode mode, const PolicyPair* pol = nullptr,
                            long long* games_solved = nullptr);

/// Per-state maximin value induced by beta: V(s) = value of the local matrix
/// game. When beta parameterizes A_{V_k,.}, this equals T V_k.
Value induced_value(const LinearGameModel& lg, const Eigen::VectorXd& beta);

struct LinearPiOptions {
  std::optional<Value> reference;  // J* of the base game, for trace sup_error
  bool with_trace = true;          // induced-value diagnostics per iteration
};

struct LinearPiResult {
  std::vector<Eigen::VectorXd> beta_trace;  // beta_0 .. beta_K
  ConvergenceTrace trace;                   // rows describe W_k = induced_value(beta_k)
  long long matrix_games_solved = 0;        // core solves (backups + extraction)
  long long diagnostic_games_solved = 0;    // induced-value trace solves
};

/// K iterations of generalized PI in beta space: H-1 Bellman backups, one
/// policy-extraction pass over the states reachable from the anchors, then m
/// policy-mode backups under the frozen strategies (INFINITE via the d x d
/// fixed-point solve). With beta_0 = beta_for_value(V_0), iterate k
/// parameterizes A_{V_k,.} for the tabular iterates V_k, and the trace rows
/// describe W_k = induced_value(beta_k) = T V_k: sup_error = ||W_k - J*||,
/// bellman_residual = ||T W_k - W_k||, both computed in beta space.
LinearPiResult linear_generalized_pi(const LinearGameModel& lg,
                                     const Eigen::VectorXd& beta0, Depth m, int h,
                                     int iterations,
                                     const LinearPiOptions& options = {});

/// Per-iteration computation-cost report. backup_ops and lsq_ops cover the
/// H-1 Bellman plus m policy backup passes at d(2r+1) per anchor and
/// floor(d^3/3) per least-squares solve; matrix_game_count = H * reach_sum
/// exactly; total_per_iteration adds local-game assembly-and-solve at
/// r a_max^2 d per solved game. The d^3/3 and assembly terms are
/// order-of-magnitude ledger entries (upper bounds), not measured op counts.
struct CostReport {
  long long backup_ops;
  long long lsq_ops;
  long long matrix_game_count;
  long long total_per_iteration;
};

/// All arguments must be >= 1 (ParameterOutOfRange otherwise; the model is
/// defined for finite positive m).
CostReport cost_model(int d, int r, int a_max, int anchor_count, long long reach_sum,
                      int m, int h);

}  // namespace mgplan

#endif  // MGPLAN_LINEAR_GAME_HPP_
