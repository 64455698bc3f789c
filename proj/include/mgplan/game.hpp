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
// Immutable representation of a discounted two-player zero-sum Markov game
// (S, U, V, P, g, alpha), stochastic policy pairs, value vectors, Q tables,
// and exact policy evaluation.

#ifndef MGPLAN_GAME_HPP_
#define MGPLAN_GAME_HPP_

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "mgplan/errors.hpp"

namespace mgplan {

/// State value vector of length |S|.
using Value = Eigen::VectorXd;

/// One sparse transition outcome: successor state and its probability.
/// The per-triple list of these is the reachable set R(s,u,v); it holds
/// exactly the support of the distribution (entries with probability 0 are
/// never stored).
struct Transition {
  int successor;
  double prob;
};

struct RewardEntry {
  int s, u, v;
  double value;
};

struct TransitionEntry {
  int s, u, v, successor;
  double prob;
};

/// Raw, unvalidated game description as parsed from a game file. Indices are
/// 0-based. Every (s, u < actions_max[s], v < actions_min[s]) triple must
/// carry exactly one reward entry and a full transition distribution;
/// undefined triples are rejected (the off-domain g := 0 convention is a
/// proof convenience, not a modeling feature).
struct GameDescription {
  int num_states = 0;
  double discount = 0.0;
  std::vector<int> actions_max;  // |U(s)| per state
  std::vector<int> actions_min;  // |V(s)| per state
  std::vector<RewardEntry> rewards;
  std::vector<TransitionEntry> transitions;
};

/// Validated immutable game model. Construction is only possible through
/// validate_game (or the internal builder used for programmatically induced
/// models); afterwards the model is safe to share across threads.
///
/// Maximizer actions index u in [0, actions_max(s)); minimizer actions index
/// v in [0, actions_min(s)). Rewards g(s,u,v) lie in [0,1]; transition rows
/// sum to 1 within the construction tolerance; 0 < alpha < 1 strictly.
class GameModel {
 public:
  int num_states() const { return num_states_; }
  double discount() const { return discount_; }
  int actions_max(int s) const { return actions_max_[s]; }
  int actions_min(int s) const { return actions_min_[s]; }

  /// Total number of valid (s,u,v) triples.
  int num_triples() const { return static_cast<int>(reward_.size()); }

  /// Flat index of (s,u,v); the (u,v) block of a state is row-major in u.
  int triple_index(int s, int u, int v) const {
    return triple_offset_[s] + u * actions_min_[s] + v;
  }

  int triple_state(int t) const { return triple_state_[t]; }
  int triple_u(int t) const {
    const int s = triple_state_[t];
    return (t - triple_offset_[s]) / actions_min_[s];
  }
  int triple_v(int t) const {
    const int s = triple_state_[t];
    return (t - triple_offset_[s]) % actions_min_[s];
  }

  double reward(int s, int u, int v) const { return reward_[triple_index(s, u, v)]; }
  double reward_at(int t) const { return reward_[t]; }

  /// Reachable set R(s,u,v) with probabilities; exactly the support of
  /// P(.|s,u,v), ordered by ascending successor index.
  std::span<const Transition> reach(int s, int u, int v) const {
    return reach_at(triple_index(s, u, v));
  }
  std::span<const Transition> reach_at(int t) const {
    return {transitions_.data() + row_offset_[t],
            static_cast<std::size_t>(row_offset_[t + 1] - row_offset_[t])};
  }

  /// Sum of |R(s,u,v)| over all triples (the sparse model size).
  long long reach_total() const { return static_cast<long long>(transitions_.size()); }

  /// Builds a model from raw parts that are already structurally indexed,
  /// still enforcing all invariants but at a caller-chosen row-sum tolerance.
  /// Internal code paths (empirical models from integer counts, games induced
  /// by linear feature models) construct through here; file input goes
  /// through validate_game and the strict 1e-12 gate.
  static GameModel FromDescription(const GameDescription& desc, double row_sum_tol);

 private:
  GameModel() = default;

  int num_states_ = 0;
  double discount_ = 0.0;
  std::vector<int> actions_max_, actions_min_;
  std::vector<int> triple_offset_;  // per state, size |S|+1
  std::vector<int> triple_state_;   // per triple
  std::vector<double> reward_;      // per triple
  std::vector<int> row_offset_;     // per triple, size num_triples+1
  std::vector<Transition> transitions_;
};

/// Stochastic policy pair: mu[s] is a distribution over U(s), nu[s] over
/// V(s).
struct PolicyPair {
  std::vector<Eigen::VectorXd> mu;
  std::vector<Eigen::VectorXd> nu;
};

/// Q table over valid triples, indexed by GameModel::triple_index. Houses
/// backups A_{V,s}(u,v) and policy Q values.
struct QTable {
  std::vector<double> values;

  double at(const GameModel& game, int s, int u, int v) const {
    return values[game.triple_index(s, u, v)];
  }
};

/// Validates a raw description against every model invariant and returns the
/// immutable model. All violations are collected before throwing, each tagged
/// with its kind: NonstochasticRow, RewardOutOfRange, DiscountOutOfRange,
/// DanglingSuccessor, DuplicateEntry, MissingTriple, BadActionCount,
/// BadIndex. Probability/reward tolerance is 1e-12; rows failing it are
/// rejected, never renormalized.
GameModel validate_game(const GameDescription& desc);

/// Throws DimensionError / ModelError unless pol is a valid policy pair for
/// game (dimensions match; distributions nonnegative, sums within 1e-12).
void check_policy(const GameModel& game, const PolicyPair& pol);

/// Transition matrix P_{mu,nu}(s,s') = sum_u sum_v mu(u) nu(v) P(s'|s,u,v).
/// Rows sum to 1 within 1e-12.
Eigen::MatrixXd policy_transition(const GameModel& game, const PolicyPair& pol);

/// Reward vector g_{mu,nu}(s) = sum_u sum_v mu(u) nu(v) g(s,u,v).
Value policy_reward(const GameModel& game, const PolicyPair& pol);

/// Exact policy value J^{mu,nu}: the unique fixed point of T_{mu,nu},
/// computed by a direct linear solve of (I - alpha P_{mu,nu}) J = g_{mu,nu}.
/// Throws NumericalError on a (numerically) singular system, which cannot
/// happen for a valid model and signals corruption.
Value exact_policy_value(const GameModel& game, const PolicyPair& pol);

/// One-step backup table Q(s,u,v) = g(s,u,v) + alpha sum_{s'} P(s'|s,u,v)
/// V(s'); entry (u,v) equals the local payoff matrix A_{V,s}(u,v).
QTable q_from_v(const GameModel& game, const Value& v);

/// Local payoff matrix A_{V,s} (rows = maximizer actions).
Eigen::MatrixXd local_payoff(const GameModel& game, const Value& v, int s);

inline double sup_norm(const Value& v) { return v.lpNorm<Eigen::Infinity>(); }
inline double sup_dist(const Value& a, const Value& b) {
  return (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace mgplan

#endif  // MGPLAN_GAME_HPP_
