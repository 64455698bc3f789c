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

#include "mgplan/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mgplan/parallel.hpp"

namespace mgplan {
namespace {

std::string Triple(int s, int u, int v) {
  return "(s=" + std::to_string(s) + ",u=" + std::to_string(u) +
         ",v=" + std::to_string(v) + ")";
}

}  // namespace

GameModel GameModel::FromDescription(const GameDescription& desc, double row_sum_tol) {
  std::vector<std::string> bad;

  // Structural gate: without consistent sizes the per-triple checks below
  // cannot even be indexed, so these throw on their own.
  if (desc.num_states <= 0) bad.push_back("BadIndex: num_states must be positive");
  if (static_cast<int>(desc.actions_max.size()) != desc.num_states)
    bad.push_back("BadActionCount: actions_max has " +
                  std::to_string(desc.actions_max.size()) + " entries, expected " +
                  std::to_string(desc.num_states));
  if (static_cast<int>(desc.actions_min.size()) != desc.num_states)
    bad.push_back("BadActionCount: actions_min has " +
                  std::to_string(desc.actions_min.size()) + " entries, expected " +
                  std::to_string(desc.num_states));
  if (!bad.empty()) throw ModelError(std::move(bad));

  for (int s = 0; s < desc.num_states; ++s) {
    if (desc.actions_max[s] < 1)
      bad.push_back("BadActionCount: actions_max[" + std::to_string(s) + "] < 1");
    if (desc.actions_min[s] < 1)
      bad.push_back("BadActionCount: actions_min[" + std::to_string(s) + "] < 1");
  }
  if (!bad.empty()) throw ModelError(std::move(bad));

  GameModel model;
  model.num_states_ = desc.num_states;
  model.discount_ = desc.discount;
  model.actions_max_ = desc.actions_max;
  model.actions_min_ = desc.actions_min;
  model.triple_offset_.assign(desc.num_states + 1, 0);
  for (int s = 0; s < desc.num_states; ++s)
    model.triple_offset_[s + 1] =
        model.triple_offset_[s] + desc.actions_max[s] * desc.actions_min[s];
  const int num_triples = model.triple_offset_.back();
  model.triple_state_.resize(num_triples);
  for (int s = 0; s < desc.num_states; ++s)
    std::fill(model.triple_state_.begin() + model.triple_offset_[s],
              model.triple_state_.begin() + model.triple_offset_[s + 1], s);

  if (!(desc.discount > 0.0 && desc.discount < 1.0))
    bad.push_back("DiscountOutOfRange: discount must lie strictly in (0,1), got " +
                  std::to_string(desc.discount));

  auto triple_ok = [&](int s, int u, int v) {
    return s >= 0 && s < desc.num_states && u >= 0 && u < desc.actions_max[s] &&
           v >= 0 && v < desc.actions_min[s];
  };

  // Rewards: exactly one entry per valid triple, value in [0,1].
  model.reward_.assign(num_triples, 0.0);
  std::vector<char> has_reward(num_triples, 0);
  for (const auto& r : desc.rewards) {
    if (!triple_ok(r.s, r.u, r.v)) {
      bad.push_back("BadIndex: reward entry " + Triple(r.s, r.u, r.v) +
                    " outside the game's state/action ranges");
      continue;
    }
    const int t = model.triple_index(r.s, r.u, r.v);
    if (has_reward[t]) {
      bad.push_back("DuplicateEntry: reward for " + Triple(r.s, r.u, r.v) +
                    " given more than once");
      continue;
    }
    has_reward[t] = 1;
    if (!(r.value >= 0.0 && r.value <= 1.0))
      bad.push_back("RewardOutOfRange: g" + Triple(r.s, r.u, r.v) + " = " +
                    std::to_string(r.value) + " outside [0,1]");
    model.reward_[t] = r.value;
  }

  // Transitions: collect per triple, detect duplicates, drop explicit zeros
  // after the duplicate check so R(s,u,v) is exactly the support.
  std::vector<std::vector<Transition>> rows(num_triples);
  for (const auto& e : desc.transitions) {
    if (!triple_ok(e.s, e.u, e.v)) {
      bad.push_back("BadIndex: transition entry " + Triple(e.s, e.u, e.v) +
                    " outside the game's state/action ranges");
      continue;
    }
    if (e.successor < 0 || e.successor >= desc.num_states) {
      bad.push_back("DanglingSuccessor: transition " + Triple(e.s, e.u, e.v) +
                    " -> s'=" + std::to_string(e.successor) + " with only " +
                    std::to_string(desc.num_states) + " states");
      continue;
    }
    if (!(e.prob >= 0.0) || !std::isfinite(e.prob)) {
      bad.push_back("NonstochasticRow: transition " + Triple(e.s, e.u, e.v) +
                    " -> s'=" + std::to_string(e.successor) +
                    " has probability " + std::to_string(e.prob));
      continue;
    }
    rows[model.triple_index(e.s, e.u, e.v)].push_back({e.successor, e.prob});
  }

  for (int t = 0; t < num_triples; ++t) {
    const int s = model.triple_state_[t];
    const int u = model.triple_u(t);
    const int v = model.triple_v(t);
    if (!has_reward[t])
      bad.push_back("MissingTriple: no reward entry for " + Triple(s, u, v));
    auto& row = rows[t];
    std::sort(row.begin(), row.end(),
              [](const Transition& a, const Transition& b) {
                return a.successor < b.successor;
              });
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      sum += row[i].prob;
      if (i > 0 && row[i].successor == row[i - 1].successor)
        bad.push_back("DuplicateEntry: transition " + Triple(s, u, v) + " -> s'=" +
                      std::to_string(row[i].successor) + " given more than once");
    }
    if (std::abs(sum - 1.0) > row_sum_tol)
      bad.push_back("NonstochasticRow: transition row " + Triple(s, u, v) +
                    " sums to " + std::to_string(sum));
    row.erase(std::remove_if(row.begin(), row.end(),
                             [](const Transition& tr) { return tr.prob == 0.0; }),
              row.end());
  }

  if (!bad.empty()) throw ModelError(std::move(bad));

  model.row_offset_.assign(num_triples + 1, 0);
  for (int t = 0; t < num_triples; ++t)
    model.row_offset_[t + 1] = model.row_offset_[t] + static_cast<int>(rows[t].size());
  model.transitions_.reserve(model.row_offset_.back());
  for (auto& row : rows)
    model.transitions_.insert(model.transitions_.end(), row.begin(), row.end());
  return model;
}

GameModel validate_game(const GameDescription& desc) {
  return GameModel::FromDescription(desc, 1e-12);
}

void check_policy(const GameModel& game, const PolicyPair& pol) {
  const int n = game.num_states();
  if (static_cast<int>(pol.mu.size()) != n || static_cast<int>(pol.nu.size()) != n)
    throw DimensionError("policy has " + std::to_string(pol.mu.size()) + "/" +
                         std::to_string(pol.nu.size()) + " state entries, game has " +
                         std::to_string(n));
  std::vector<std::string> bad;
  auto check_dist = [&](const Eigen::VectorXd& d, int want, const char* side, int s) {
    if (d.size() != want) {
      throw DimensionError(std::string(side) + " strategy at state " +
                           std::to_string(s) + " has " + std::to_string(d.size()) +
                           " entries, expected " + std::to_string(want));
    }
    if (d.minCoeff() < 0.0)
      bad.push_back(std::string("NonstochasticRow: ") + side + " strategy at state " +
                    std::to_string(s) + " has a negative entry");
    if (std::abs(d.sum() - 1.0) > 1e-12)
      bad.push_back(std::string("NonstochasticRow: ") + side + " strategy at state " +
                    std::to_string(s) + " sums to " + std::to_string(d.sum()));
  };
  for (int s = 0; s < n; ++s) {
    check_dist(pol.mu[s], game.actions_max(s), "maximizer", s);
    check_dist(pol.nu[s], game.actions_min(s), "minimizer", s);
  }
  if (!bad.empty()) throw ModelError(std::move(bad));
}

Eigen::MatrixXd policy_transition(const GameModel& game, const PolicyPair& pol) {
  check_policy(game, pol);
  const int n = game.num_states();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int u = 0; u < game.actions_max(s); ++u) {
      if (pol.mu[s][u] == 0.0) continue;
      for (int v = 0; v < game.actions_min(s); ++v) {
        const double w = pol.mu[s][u] * pol.nu[s][v];
        if (w == 0.0) continue;
        for (const Transition& tr : game.reach(s, u, v)) p(s, tr.successor) += w * tr.prob;
      }
    }
  }
  return p;
}

Value policy_reward(const GameModel& game, const PolicyPair& pol) {
  check_policy(game, pol);
  const int n = game.num_states();
  Value g = Value::Zero(n);
  for (int s = 0; s < n; ++s) {
    for (int u = 0; u < game.actions_max(s); ++u) {
      if (pol.mu[s][u] == 0.0) continue;
      for (int v = 0; v < game.actions_min(s); ++v) {
        const double w = pol.mu[s][u] * pol.nu[s][v];
        if (w == 0.0) continue;
        g[s] += w * game.reward(s, u, v);
      }
    }
  }
  return g;
}

Value exact_policy_value(const GameModel& game, const PolicyPair& pol) {
  const int n = game.num_states();
  const Eigen::MatrixXd p = policy_transition(game, pol);
  const Value g = policy_reward(game, pol);
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - game.discount() * p;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible())
    throw NumericalError(
        "SingularSystem: (I - alpha P) not invertible; the model is corrupted");
  return lu.solve(g);
}

QTable q_from_v(const GameModel& game, const Value& v) {
  if (v.size() != game.num_states())
    throw DimensionError("value vector has " + std::to_string(v.size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  QTable q;
  q.values.assign(game.num_triples(), 0.0);
  const double alpha = game.discount();
  parallel_for(game.num_triples(), [&](int t) {
    double acc = 0.0;
    for (const Transition& tr : game.reach_at(t)) acc += tr.prob * v[tr.successor];
    q.values[t] = game.reward_at(t) + alpha * acc;
  });
  return q;
}

Eigen::MatrixXd local_payoff(const GameModel& game, const Value& v, int s) {
  if (v.size() != game.num_states())
    throw DimensionError("value vector has " + std::to_string(v.size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  Eigen::MatrixXd a(game.actions_max(s), game.actions_min(s));
  const double alpha = game.discount();
  for (int u = 0; u < game.actions_max(s); ++u) {
    for (int w = 0; w < game.actions_min(s); ++w) {
      double acc = 0.0;
      for (const Transition& tr : game.reach(s, u, w)) acc += tr.prob * v[tr.successor];
      a(u, w) = game.reward(s, u, w) + alpha * acc;
    }
  }
  return a;
}

}  // namespace mgplan
