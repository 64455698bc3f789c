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
// Planning algorithms: Shapley value iteration, generalized policy iteration
// (lookahead + m-step rollout), naive (Pollatschek-Avi-Itzhak) policy
// iteration with cycle detection, and Hoffman-Karp iteration; plus the
// Assumption-1 / convergence-rate parameter advisors.

#ifndef MGPLAN_PLANNERS_HPP_
#define MGPLAN_PLANNERS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mgplan/bellman.hpp"
#include "mgplan/game.hpp"

namespace mgplan {

struct TraceRow {
  int iter;
  std::optional<double> sup_error;  // ||V_k - J*||_inf, when a reference is given
  double bellman_residual;          // ||T V_k - V_k||_inf
  std::optional<double> ratio;      // sup_error_k / sup_error_{k-1}
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  std::string termination;  // "converged" | "max_iters" | "cycling"
};

enum class PlanOutcome { kConverged, kMaxIters, kCycling };

struct PlannerConfig {
  Depth m = Depth::finite(0);  // rollout depth
  int lookahead_h = 1;         // H
  int max_iters = 100000;
  double stop_tol = 1e-9;      // on the Bellman residual ||T V_k - V_k||_inf
  std::optional<Value> initial_v;   // defaults to the zero vector
  std::optional<Value> reference;   // J* for trace sup_error / ratio columns
  bool strict_assumption = false;   // generalized_pi: throw when Assumption 1 fails
};

/// Every planner stops on ||T V_k - V_k||_inf <= stop_tol and then returns
/// T V_k, so the standard contraction argument gives the final-answer
/// guarantee ||V - J*||_inf <= stop_tol * alpha / (1 - alpha). MaxIters and
/// Cycling are outcomes, not exceptions: the last iterate and full trace are
/// always carried out.
struct PlannerResult {
  Value value;
  PolicyPair policy;
  ConvergenceTrace trace;
  PlanOutcome outcome;
  long long operator_applications = 0;  // one-step operator sweeps (T, T_mu, T_{mu,nu});
                                        // an INFINITE rollout's linear solve counts once
  long long matrix_games_solved = 0;    // LP solves; best-response scans excluded
};

/// Shapley iteration V_{k+1} = T V_k.
PlannerResult value_iteration(const GameModel& game, const PlannerConfig& config);

/// Generalized policy iteration: V_{k+1} = T^m_{mu,nu} T^{H-1} V_k with
/// (mu,nu) the H-step lookahead policy of V_k. With m=0, H=2 the iterates are
/// bitwise identical to value_iteration (both emit the same apply_bellman
/// output). Throws ParameterError("AssumptionViolated...") in strict mode
/// when Assumption 1 fails for (alpha, m, H).
PlannerResult generalized_pi(const GameModel& game, const PlannerConfig& config);

/// Naive policy iteration (H forced to 1): greedy policy pair, then an m-step
/// rollout. Not convergent in general; a revisit of a previously seen greedy
/// policy pair with non-decreasing residual is reported as Cycling (policies
/// are compared by exact strategy bytes, so detection is collision-free).
/// Convergence is never claimed unless the residual test passes, and the
/// residual test runs before the cycle test.
PlannerResult naive_pi(const GameModel& game, const PlannerConfig& config);

/// Hoffman-Karp iteration: freeze the maximizer's greedy policy mu_{k+1},
/// solve the minimizer's MDP to tolerance 1e-12 by iterating T_mu, repeat.
PlannerResult hoffman_karp(const GameModel& game, const PlannerConfig& config);

/// Assumption-1 / convergence-rate report for (alpha, m, H).
/// assumption1_lhs = alpha^{H-1} + 2(1+alpha^m) alpha^{H-1}/(1-alpha);
/// kappa = alpha^{H-1} + (1+alpha^m)(alpha^{H-1}/(1-alpha))(1+alpha);
/// alpha^INFINITE := 0. The assumption's coefficient 2 and the rate's (1+alpha)
/// genuinely differ; both are surfaced and neither is "corrected".
struct RateReport {
  double kappa;
  bool assumption1_satisfied;
  double assumption1_lhs;
};

RateReport check_assumption1(double alpha, Depth m, int h);

/// Smallest H >= 1 satisfying Assumption 1 for (alpha, m); always exists
/// because alpha^{H-1} -> 0.
int min_lookahead(double alpha, Depth m);

}  // namespace mgplan

#endif  // MGPLAN_PLANNERS_HPP_
