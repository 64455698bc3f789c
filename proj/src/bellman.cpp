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

#include "mgplan/bellman.hpp"

#include <cmath>
#include <string>

#include "mgplan/parallel.hpp"

namespace mgplan {

double Depth::alpha_pow(double alpha) const {
  if (is_infinite()) return 0.0;
  return std::pow(alpha, steps_);
}

Value apply_policy_operator(const GameModel& game, const PolicyPair& pol, const Value& v) {
  check_policy(game, pol);
  if (v.size() != game.num_states())
    throw DimensionError("value vector has " + std::to_string(v.size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  const double alpha = game.discount();
  Value out(game.num_states());
  parallel_for(game.num_states(), [&](int s) {
    double acc = 0.0;
    for (int u = 0; u < game.actions_max(s); ++u) {
      if (pol.mu[s][u] == 0.0) continue;
      for (int w = 0; w < game.actions_min(s); ++w) {
        const double weight = pol.mu[s][u] * pol.nu[s][w];
        if (weight == 0.0) continue;
        double backup = game.reward(s, u, w);
        double next = 0.0;
        for (const Transition& tr : game.reach(s, u, w)) next += tr.prob * v[tr.successor];
        acc += weight * (backup + alpha * next);
      }
    }
    out[s] = acc;
  });
  return out;
}

std::pair<Value, PolicyPair> apply_bellman(const GameModel& game, const Value& v) {
  if (v.size() != game.num_states())
    throw DimensionError("value vector has " + std::to_string(v.size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  const int n = game.num_states();
  Value tv(n);
  PolicyPair greedy;
  greedy.mu.resize(n);
  greedy.nu.resize(n);
  parallel_for(n, [&](int s) {
    const MatrixGameSolution sol = solve_matrix_game(local_payoff(game, v, s));
    tv[s] = sol.value;
    greedy.mu[s] = sol.row_strategy;
    greedy.nu[s] = sol.col_strategy;
  });
  return {std::move(tv), std::move(greedy)};
}

MinApplyResult apply_min_operator(const GameModel& game,
                                  const std::vector<Eigen::VectorXd>& mu,
                                  const Value& v) {
  const int n = game.num_states();
  if (static_cast<int>(mu.size()) != n)
    throw DimensionError("maximizer policy has " + std::to_string(mu.size()) +
                         " state entries, game has " + std::to_string(n));
  if (v.size() != n)
    throw DimensionError("value vector has " + std::to_string(v.size()) +
                         " entries, game has " + std::to_string(n));
  MinApplyResult result;
  result.value.resize(n);
  result.responses.resize(n);
  parallel_for(n, [&](int s) {
    const BestResponse br = best_response_value(local_payoff(game, v, s), mu[s]);
    result.value[s] = br.value;
    result.responses[s] = br.column;
  });
  return result;
}

Value rollout(const GameModel& game, const PolicyPair& pol, const Value& v, Depth m) {
  if (m.is_infinite()) return exact_policy_value(game, pol);
  Value out = v;
  for (int i = 0; i < m.steps(); ++i) out = apply_policy_operator(game, pol, out);
  return out;
}

LookaheadResult lookahead(const GameModel& game, const Value& v, int h) {
  if (h < 1) throw ParameterError("lookahead depth H must be >= 1");
  LookaheadResult result;
  Value current = v;
  for (int i = 1; i <= h; ++i) {
    auto [next, pol] = apply_bellman(game, current);
    if (i == 1) result.one_step = next;
    if (i == h) {
      result.backed_value = std::move(current);
      result.policy = std::move(pol);
      result.top_value = next;
    }
    current = std::move(next);
  }
  return result;
}

Value composite_tmh(const GameModel& game, const Value& v, Depth m, int h) {
  const LookaheadResult look = lookahead(game, v, h);
  return rollout(game, look.policy, look.backed_value, m);
}

}  // namespace mgplan
