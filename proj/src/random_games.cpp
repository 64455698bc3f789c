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

#include "mgplan/random_games.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace mgplan {
namespace {

int support_size(const RandomGameParams& params) {
  const int n = params.num_states;
  const int target = 1 + static_cast<int>(std::lround(params.sparsity * (n - 1)));
  return std::clamp(target, std::max(1, params.min_support), n);
}

}  // namespace

GameDescription random_game_description(const RandomGameParams& params, Rng& rng) {
  if (params.num_states < 1) throw ParameterError("need at least one state");
  if (params.max_actions < 1) throw ParameterError("need at least one action");
  if (!(params.sparsity >= 0.0) || !(params.sparsity <= 1.0))
    throw ParameterError("sparsity must lie in [0, 1]");
  if (!(params.discount > 0.0) || !(params.discount < 1.0))
    throw ParameterError("discount must lie in (0, 1)");

  GameDescription desc;
  desc.num_states = params.num_states;
  desc.discount = params.discount;
  desc.actions_max.resize(params.num_states);
  desc.actions_min.resize(params.num_states);
  for (int s = 0; s < params.num_states; ++s) {
    desc.actions_max[s] = 1 + rng.uniform_int(params.max_actions);
    desc.actions_min[s] = 1 + rng.uniform_int(params.max_actions);
  }
  const int support = support_size(params);
  for (int s = 0; s < params.num_states; ++s) {
    for (int u = 0; u < desc.actions_max[s]; ++u) {
      for (int v = 0; v < desc.actions_min[s]; ++v) {
        desc.rewards.push_back({s, u, v, rng.uniform01()});
        std::vector<int> successors = rng.sample_distinct(params.num_states, support);
        std::sort(successors.begin(), successors.end());
        const std::vector<double> probs = rng.dirichlet_uniform(support);
        for (int i = 0; i < support; ++i)
          desc.transitions.push_back({s, u, v, successors[i], probs[i]});
      }
    }
  }
  return desc;
}

GameModel random_game(const RandomGameParams& params, Rng& rng) {
  return validate_game(random_game_description(params, rng));
}

PolicyPair random_policy(const GameModel& game, Rng& rng) {
  PolicyPair pol;
  pol.mu.resize(game.num_states());
  pol.nu.resize(game.num_states());
  for (int s = 0; s < game.num_states(); ++s) {
    const std::vector<double> mu = rng.dirichlet_uniform(game.actions_max(s));
    const std::vector<double> nu = rng.dirichlet_uniform(game.actions_min(s));
    pol.mu[s] = Eigen::Map<const Eigen::VectorXd>(mu.data(), mu.size());
    pol.nu[s] = Eigen::Map<const Eigen::VectorXd>(nu.data(), nu.size());
  }
  return pol;
}

StateFeatureScheme random_features(int num_states, int d, Rng& rng) {
  if (num_states < 1 || d < 1) throw ParameterError("need |S| >= 1 and d >= 1");
  if (d > num_states) throw ParameterError("need d <= |S| for a feasible anchor set");
  const int anchor_count = std::min(num_states, d + 2);
  for (int attempt = 0; attempt < 100; ++attempt) {
    StateFeatureScheme scheme;
    scheme.phi.resize(num_states, d);
    for (int s = 0; s < num_states; ++s)
      for (int j = 0; j < d; ++j) scheme.phi(s, j) = rng.uniform01();
    scheme.anchors = rng.sample_distinct(num_states, anchor_count);
    std::sort(scheme.anchors.begin(), scheme.anchors.end());
    try {
      build_projection(scheme);
      return scheme;
    } catch (const RankError&) {
      continue;  // measure-zero draw; redraw deterministically
    }
  }
  throw NumericalError("random feature scheme failed rank certification repeatedly");
}

LinearGameDescription random_linear_game(const RandomLinearParams& params, Rng& rng) {
  if (params.num_states < 1) throw ParameterError("need at least one state");
  if (params.max_actions < 1) throw ParameterError("need at least one action");
  if (params.dim < 1) throw ParameterError("need d >= 1");
  if (params.feature_support < 1 || params.feature_support > params.dim)
    throw ParameterError("feature support must lie in [1, d]");
  if (params.column_support < 1 || params.column_support > params.num_states)
    throw ParameterError("column support must lie in [1, |S|]");
  if (!(params.discount > 0.0) || !(params.discount < 1.0))
    throw ParameterError("discount must lie in (0, 1)");

  for (int attempt = 0; attempt < 100; ++attempt) {
    LinearGameDescription desc;
    desc.num_states = params.num_states;
    desc.discount = params.discount;
    desc.dim = params.dim;
    desc.actions_max.resize(params.num_states);
    desc.actions_min.resize(params.num_states);
    for (int s = 0; s < params.num_states; ++s) {
      desc.actions_max[s] = 1 + rng.uniform_int(params.max_actions);
      desc.actions_min[s] = 1 + rng.uniform_int(params.max_actions);
    }

    desc.theta.resize(params.dim);
    for (int j = 0; j < params.dim; ++j) desc.theta[j] = rng.uniform01();

    desc.eta = Eigen::MatrixXd::Zero(params.num_states, params.dim);
    for (int j = 0; j < params.dim; ++j) {
      const std::vector<int> rows = rng.sample_distinct(params.num_states, params.column_support);
      const std::vector<double> w = rng.dirichlet_uniform(params.column_support);
      for (int i = 0; i < params.column_support; ++i) desc.eta(rows[i], j) = w[i];
    }

    for (int s = 0; s < params.num_states; ++s) {
      for (int u = 0; u < desc.actions_max[s]; ++u) {
        for (int v = 0; v < desc.actions_min[s]; ++v) {
          Eigen::VectorXd phi = Eigen::VectorXd::Zero(params.dim);
          const std::vector<int> idx = rng.sample_distinct(params.dim, params.feature_support);
          const std::vector<double> w = rng.dirichlet_uniform(params.feature_support);
          for (int i = 0; i < params.feature_support; ++i) phi[idx[i]] = w[i];
          desc.features.emplace_back(TripleKey{s, u, v}, std::move(phi));
        }
      }
    }

    // Anchor selection: greedy Gram-Schmidt sweep in canonical triple order
    // picks the first d feature rows that are numerically independent.
    Eigen::MatrixXd basis(params.dim, params.dim);
    int picked = 0;
    for (std::size_t i = 0; i < desc.features.size() && picked < params.dim; ++i) {
      Eigen::VectorXd r = desc.features[i].second;
      const auto span = basis.leftCols(picked);
      r -= span * (span.transpose() * r);
      r -= span * (span.transpose() * r);  // second pass for stability
      if (r.norm() > 1e-8) {
        basis.col(picked++) = r.normalized();
        desc.anchors.push_back(desc.features[i].first);
      }
    }
    if (picked == params.dim) return desc;
    // Sparse draws can fail to span; redraw the whole instance.
  }
  throw NumericalError("random linear model failed rank certification repeatedly");
}

}  // namespace mgplan
