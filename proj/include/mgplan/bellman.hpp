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
// Operator machinery: the policy operator T_{mu,nu}, the minimizing operator
// T_mu, the Bellman (Shapley) operator T, m-step rollouts, H-step lookahead
// with policy extraction, and the composite T_{m,H}.

#ifndef MGPLAN_BELLMAN_HPP_
#define MGPLAN_BELLMAN_HPP_

#include <utility>
#include <vector>

#include "mgplan/game.hpp"
#include "mgplan/matrix_game.hpp"

namespace mgplan {

/// Rollout depth: a nonnegative integer or INFINITE. INFINITE rollouts are
/// realized as a direct linear solve (the exact fixed point), not iteration
/// to tolerance.
class Depth {
 public:
  static Depth finite(int steps) {
    if (steps < 0) throw ParameterError("rollout depth must be >= 0");
    return Depth(steps);
  }
  static Depth infinite() { return Depth(-1); }

  bool is_infinite() const { return steps_ < 0; }
  int steps() const {
    if (is_infinite()) throw ParameterError("finite steps requested from INFINITE depth");
    return steps_;
  }

  /// alpha^m with the convention alpha^INFINITE = 0.
  double alpha_pow(double alpha) const;

  bool operator==(const Depth& other) const { return steps_ == other.steps_; }

 private:
  explicit Depth(int steps) : steps_(steps) {}
  int steps_;  // -1 encodes INFINITE
};

/// One application of T_{mu,nu}: returns g_{mu,nu} + alpha P_{mu,nu} V
/// without forming the dense transition matrix.
Value apply_policy_operator(const GameModel& game, const PolicyPair& pol, const Value& v);

/// One application of the Bellman operator T: per state, the value of the
/// matrix game on A_{V,s}, plus the argmax-argmin greedy strategies. Ties
/// inherit the matrix-game solver's deterministic pivot selection.
std::pair<Value, PolicyPair> apply_bellman(const GameModel& game, const Value& v);

struct MinApplyResult {
  Value value;                 // T_mu V
  std::vector<int> responses;  // minimizing pure column per state
};

/// One application of T_mu V = min_nu T_{mu,nu} V for a fixed maximizer
/// policy: per-state best pure-column response against mu(s) on A_{V,s}.
MinApplyResult apply_min_operator(const GameModel& game,
                                  const std::vector<Eigen::VectorXd>& mu,
                                  const Value& v);

/// m-fold application of T_{mu,nu} ("the return" of an m-step rollout);
/// INFINITE returns exact_policy_value(game, pol).
Value rollout(const GameModel& game, const PolicyPair& pol, const Value& v, Depth m);

/// Output of an H-step lookahead pass. one_step (T V) falls out of the first
/// application and is carried along so planners get Bellman residuals for
/// free; backed_value (T^{H-1} V) is likewise a byproduct, never recomputed.
struct LookaheadResult {
  Value backed_value;  // T^{H-1} V; equals the input V when H = 1
  Value top_value;     // T^H V
  Value one_step;      // T V
  PolicyPair policy;   // strategies realizing the H-th application
};

/// H-step lookahead: backed_value = T^{H-1}V, policy = argmax-argmin at the
/// H-th application, top_value = T^H V = T_{policy} backed_value.
LookaheadResult lookahead(const GameModel& game, const Value& v, int h);

/// The composite operator T_{m,H} V = T^m_{mu,nu} T^{H-1} V with (mu,nu) the
/// lookahead policy of V; one iterate of generalized policy iteration.
Value composite_tmh(const GameModel& game, const Value& v, Depth m, int h);

}  // namespace mgplan

#endif  // MGPLAN_BELLMAN_HPP_
