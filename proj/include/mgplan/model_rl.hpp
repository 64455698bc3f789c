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
// Model-based reinforcement learning with a generative model: empirical
// transition estimation from i.i.d. successor samples, planning on the
// learned model, evaluation of the learned policy against the true game,
// and the sample/computation bound report.

#ifndef MGPLAN_MODEL_RL_HPP_
#define MGPLAN_MODEL_RL_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "mgplan/bellman.hpp"
#include "mgplan/game.hpp"
#include "mgplan/planners.hpp"

namespace mgplan {

/// Empirical model from N generative samples per (s,u,v): estimated
/// transitions P_hat(s'|s,u,v) = count/N with the TRUE rewards (the
/// reward-aware setting). counts[t] lists (successor, draws) pairs for
/// triple index t, sorted by successor; the counts of each tuple sum to N.
struct EmpiricalModel {
  GameModel induced;
  long long n_per_tuple;
  std::vector<std::vector<std::pair<int, long long>>> counts;
};

/// Draws exactly N i.i.d. successors per valid (s,u,v) from the true game's
/// transition kernel. Each tuple samples on its own deterministic stream
/// derived from the seed, so the result is reproducible and independent of
/// the thread count. The induced model always validates: empirical rows are
/// integer ratios supported inside the true support.
EmpiricalModel generative_sample(const GameModel& game, long long n, std::uint64_t seed);

struct PlanOnModelResult {
  PolicyPair policy;     // (mu_hat, nu_hat), the final lookahead policy
  Value v_hat;           // final value iterate on the learned model
  PlannerResult detail;  // full planner output on the learned model
};

/// Plans on the learned model with generalized policy iteration until the
/// learned-model optimality premise ||J_hat^{mu,nu} - J_hat*||_inf <= eps_opt
/// is certified. The certificate translates the Bellman residual: stopping at
/// ||T V - V||_inf <= eps_opt (1-alpha) / (2 alpha^{H-1}) bounds both the
/// lookahead policy's evaluation gap and the distance of T^{H-1}V from the
/// fixed point. Requires the (alpha, m, H) rate assumption to hold (strict
/// mode); throws NumericalError("MaxItersExceeded...") when the iteration cap
/// is hit before certification.
PlanOnModelResult plan_on_model(const EmpiricalModel& empirical, Depth m, int h,
                                double eps_opt, int max_iters = 200000);

struct LearnedPolicyError {
  double q_error;  // ||Q^{mu,nu} - Q*||_inf over all triples of the true game
  double v_error;  // ||J^{mu,nu} - J*||_inf
};

/// Evaluates a learned policy on the TRUE game: exact policy value plus
/// one-step backup give Q^{mu,nu}; the reference Q* comes from a
/// high-precision value-iteration solve of the true game.
LearnedPolicyError evaluate_learned_policy(const GameModel& true_game,
                                           const PolicyPair& policy);

struct SampleBoundInputs {
  double alpha = 0.0;
  double eps = 0.0;        // must lie in (0, 1/sqrt(1-alpha)]
  double delta = 0.0;      // failure probability, in (0,1)
  long long num_states = 0;
  long long num_u = 0;     // total maximizer actions |U|
  long long num_v = 0;     // total minimizer actions |V|
  double c = 1.0;          // the unspecified absolute constant; echoed back
  Depth m = Depth::finite(1);
  int h = 1;
  double eps_opt = 1e-3;
  int d = 1;               // feature dimension (computation bound only)
  int r = 1;               // max reachable-set size (computation bound only)
  int a_max = 1;           // largest per-state action count
};

/// n_required = ceil(c alpha ln[c |S||U||V| (1-alpha)^{-2} delta^{-1}]
///                   / ((1-alpha)^3 eps^2)), clamped to >= 1.
/// c_ops = c m H ln[1/(eps_opt(1-alpha))]/ln[1/alpha_tilde]
///         (d(2r+1) + d^3/3 + r a_max^2 d) with alpha_tilde the lookahead
/// rate; natural logarithms throughout. c_ops_applicable is false when
/// alpha_tilde >= 1, m is INFINITE, or eps_opt(1-alpha) >= 1, where the
/// expression has no meaning. Both bounds are stated for linear turn-based
/// Markov games; the report only evaluates the formulas and does not claim
/// to meter this implementation's operation count.
struct SampleBoundReport {
  long long n_required;
  double c_ops;
  bool c_ops_applicable;
  double alpha_tilde;
  SampleBoundInputs inputs;  // echoed, including c
};

SampleBoundReport sample_bound(const SampleBoundInputs& in);

}  // namespace mgplan

#endif  // MGPLAN_MODEL_RL_HPP_
