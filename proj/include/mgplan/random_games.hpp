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
// Seeded random instances: games, policies, feature schemes, and exactly
// linear models. All generators consume a caller-owned Rng in a fixed
// canonical draw order, so a seed pins every instance bit-for-bit.

#ifndef MGPLAN_RANDOM_GAMES_HPP_
#define MGPLAN_RANDOM_GAMES_HPP_

#include "mgplan/game.hpp"
#include "mgplan/linear_fa.hpp"
#include "mgplan/linear_game.hpp"
#include "mgplan/rng.hpp"

namespace mgplan {

struct RandomGameParams {
  int num_states = 5;
  int max_actions = 2;    // per-state action counts are uniform on 1..max_actions
  double sparsity = 0.5;  // transition support size: 0 deterministic, 1 full
  int min_support = 1;
  double discount = 0.9;
};

/// Uniform-reward random game: per-triple support of size
/// clamp(1 + round(sparsity (|S|-1)), min_support, |S|), distinct successors,
/// uniform-Dirichlet probabilities, rewards uniform on [0,1].
GameDescription random_game_description(const RandomGameParams& params, Rng& rng);

/// random_game_description run through full validation.
GameModel random_game(const RandomGameParams& params, Rng& rng);

/// Uniform-Dirichlet stochastic policy pair for game.
PolicyPair random_policy(const GameModel& game, Rng& rng);

/// Random state-feature scheme: |S| x d entries uniform on [0,1], anchors a
/// random distinct state subset of size min(|S|, d+2). Redrawn until the
/// anchor rows certify full rank, so the result always builds a projection.
StateFeatureScheme random_features(int num_states, int d, Rng& rng);

struct RandomLinearParams {
  int num_states = 10;
  int max_actions = 2;
  int dim = 3;
  int feature_support = 2;  // nonzero feature entries per triple
  int column_support = 3;   // support size of each transition-weight column
  double discount = 0.8;
};

/// Exactly linear model: features are sparse points of the d-simplex, the
/// transition-weight columns are sparse distributions over states (so every
/// induced row is a convex mixture of distributions), theta is uniform on
/// [0,1]^d, and the anchors are d triples picked by a greedy rank-building
/// scan so the anchor features always span R^d.
LinearGameDescription random_linear_game(const RandomLinearParams& params, Rng& rng);

}  // namespace mgplan

#endif  // MGPLAN_RANDOM_GAMES_HPP_
