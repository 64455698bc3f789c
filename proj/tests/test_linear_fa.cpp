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

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "mgplan/bellman.hpp"
#include "mgplan/planners.hpp"
#include "mgplan/random_games.hpp"
#include "test_support.hpp"

namespace mgplan_test {
namespace {

StateFeatureScheme IdentityScheme(int n) {
  StateFeatureScheme scheme;
  scheme.phi = Eigen::MatrixXd::Identity(n, n);
  scheme.anchors.resize(n);
  for (int s = 0; s < n; ++s) scheme.anchors[s] = s;
  return scheme;
}

TEST(BuildProjection, IdentityFeaturesGiveIdentityOperator) {
  const ProjectionOperator proj = build_projection(IdentityScheme(4));
  EXPECT_LE((proj.m_matrix - Eigen::MatrixXd::Identity(4, 4))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_NEAR(proj.delta_fv, 1.0, 1e-14);
}

TEST(BuildProjection, ConstantFeatureSingleAnchor) {
  StateFeatureScheme scheme;
  scheme.phi = Eigen::MatrixXd::Ones(3, 1);
  scheme.anchors = {0};
  const ProjectionOperator proj = build_projection(scheme);
  // M v replicates v(anchor) everywhere: column 0 is all ones, rest zero.
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected.col(0).setOnes();
  EXPECT_LE((proj.m_matrix - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(proj.delta_fv, 1.0, 1e-14);
}

TEST(BuildProjection, ReproducesSpanAndIsIdempotent) {
  Rng rng(131);
  const StateFeatureScheme scheme = random_features(8, 3, rng);
  const ProjectionOperator proj = build_projection(scheme);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd theta = RandomValue(3, -2.0, 2.0, rng);
    const Value in_span = scheme.phi * theta;
    EXPECT_LE(sup_dist(proj.m_matrix * in_span, in_span), 1e-10);
    const Value v = RandomValue(8, -5.0, 5.0, rng);
    const Value mv = proj.m_matrix * v;
    EXPECT_LE(sup_dist(proj.m_matrix * mv, mv), 1e-9);
  }
  // delta_fv is the induced sup-norm of M: achieved by the sign vector of
  // its worst row, and an upper bound for every unit-sup input.
  for (int rep = 0; rep < 10; ++rep) {
    const Value v = RandomValue(8, -1.0, 1.0, rng);
    EXPECT_LE((proj.m_matrix * v).lpNorm<Eigen::Infinity>(),
              proj.delta_fv + 1e-12);
  }
}

TEST(BuildProjection, SquareAnchorSetInterpolates) {
  Rng rng(137);
  StateFeatureScheme scheme;
  scheme.phi = Eigen::MatrixXd::Random(6, 3);
  scheme.anchors = {1, 3, 5};  // |D| = d: the fit interpolates at anchors
  const ProjectionOperator proj = build_projection(scheme);
  const Value v = RandomValue(6, -4.0, 4.0, rng);
  const Value mv = proj.m_matrix * v;
  for (const int s : scheme.anchors) EXPECT_NEAR(mv[s], v[s], 1e-9);
}

TEST(BuildProjection, RejectsRankDeficientAndBadAnchors) {
  StateFeatureScheme scheme;
  scheme.phi = Eigen::MatrixXd::Zero(4, 2);
  scheme.phi.col(0).setOnes();
  scheme.phi.col(1).setOnes();  // duplicate columns: Phi_D singular
  scheme.anchors = {0, 1, 2};
  try {
    build_projection(scheme);
    FAIL() << "expected RankError";
  } catch (const RankError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("RankDeficient", 0), 0u);
  }

  scheme.phi = Eigen::MatrixXd::Identity(4, 2);
  scheme.anchors = {0};  // |D| < d
  EXPECT_THROW(build_projection(scheme), RankError);
  scheme.anchors = {0, 7};
  EXPECT_THROW(build_projection(scheme), ParameterError);
  scheme.anchors = {0, 0};
  EXPECT_THROW(build_projection(scheme), ParameterError);
}

TEST(KappaFa, UnitDeltaMatchesTabularRate) {
  for (const double alpha : {0.3, 0.5, 0.8, 0.9, 0.95}) {
    for (const Depth m : {Depth::finite(0), Depth::finite(1), Depth::finite(2),
                          Depth::finite(5), Depth::infinite()}) {
      for (const int h : {1, 2, 4, 8}) {
        EXPECT_NEAR(kappa_fa(alpha, m, h, 1.0),
                    check_assumption1(alpha, m, h).kappa, 1e-12)
            << "alpha=" << alpha << " h=" << h;
      }
    }
  }
}

TEST(KappaFa, FrozenValueAndGuards) {
  // alpha=0.5, m=2, H=4, delta=1 reproduces the tabular 0.59375.
  EXPECT_NEAR(kappa_fa(0.5, Depth::finite(2), 4, 1.0), 0.59375, 1e-15);
  // Infinite rollout removes the delta-dependent term entirely.
  EXPECT_DOUBLE_EQ(kappa_fa(0.5, Depth::infinite(), 4, 7.5),
                   kappa_fa(0.5, Depth::infinite(), 4, 0.0));
  EXPECT_THROW(kappa_fa(1.0, Depth::finite(1), 1, 1.0), ParameterError);
  EXPECT_THROW(kappa_fa(0.5, Depth::finite(1), 0, 1.0), ParameterError);
  EXPECT_THROW(kappa_fa(0.5, Depth::finite(1), 1, -0.1), ParameterError);
}

TEST(FaPi, IdentityFeaturesReproduceTabularIterates) {
  Rng rng(139);
  RandomGameParams params;
  params.num_states = 8;
  params.max_actions = 3;
  params.discount = 0.8;
  const GameModel game = random_game(params, rng);
  const StateFeatureScheme scheme = IdentityScheme(8);
  const Depth m = Depth::finite(2);
  const int h = 3;
  const int iterations = 10;

  FaOptions options;
  options.reference = HighPrecisionJStar(game);
  const FaRunResult run =
      fa_pi(game, scheme, Eigen::VectorXd::Zero(8), m, h, iterations, options);
  ASSERT_EQ(run.theta_trace.size(), static_cast<std::size_t>(iterations + 1));
  ASSERT_EQ(run.trace.rows.size(), static_cast<std::size_t>(iterations));
  ASSERT_EQ(run.visited_policies.size(), static_cast<std::size_t>(iterations));
  EXPECT_EQ(run.trace.termination, "completed");

  // With Phi = I and D = S, the least-squares fit is exact and the iterates
  // must coincide with the tabular composite-operator sequence.
  Value v = Value::Zero(8);
  for (int k = 0; k <= iterations; ++k) {
    EXPECT_LE(sup_dist(run.theta_trace[k], v), 1e-12) << "iteration " << k;
    v = composite_tmh(game, v, m, h);
  }

  // And the per-iteration residual trace matches tabular generalized PI.
  PlannerConfig config;
  config.m = m;
  config.lookahead_h = h;
  config.max_iters = iterations;
  config.stop_tol = 1e-15;
  const PlannerResult gpi = generalized_pi(game, config);
  ASSERT_GE(gpi.trace.rows.size(), run.trace.rows.size());
  for (std::size_t k = 0; k < run.trace.rows.size(); ++k)
    EXPECT_NEAR(run.trace.rows[k].bellman_residual,
                gpi.trace.rows[k].bellman_residual, 1e-12);
}

TEST(FaPi, SingleStepMatchesFaPiStep) {
  Rng rng(149);
  RandomGameParams params;
  params.num_states = 7;
  const GameModel game = random_game(params, rng);
  const StateFeatureScheme scheme = random_features(7, 3, rng);
  const ProjectionOperator proj = build_projection(scheme);
  const Eigen::VectorXd theta0 = RandomValue(3, -1.0, 1.0, rng);
  const Eigen::VectorXd step =
      fa_pi_step(game, scheme, proj, theta0, Depth::finite(1), 2);
  const FaRunResult run = fa_pi(game, scheme, theta0, Depth::finite(1), 2, 1);
  EXPECT_LE(sup_dist(step, run.theta_trace[1]), 0.0);
}

TEST(FaPi, IdentityFeaturesSatisfyPureGeometricBound) {
  // delta_app = 0 for identity features, so the error bound collapses to a
  // clean geometric decay at the tabular rate.
  Rng rng(151);
  RandomGameParams params;
  params.num_states = 6;
  params.max_actions = 2;
  params.discount = 0.5;
  const GameModel game = random_game(params, rng);
  const Depth m = Depth::finite(3);
  const int h = min_lookahead(0.5, m);
  const double kappa = kappa_fa(0.5, m, h, 1.0);
  ASSERT_LT(kappa, 1.0);

  FaOptions options;
  options.reference = HighPrecisionJStar(game);
  const FaRunResult run = fa_pi(game, IdentityScheme(6),
                                Eigen::VectorXd::Zero(6), m, h, 15, options);
  EXPECT_LE(run.bound.delta_app_estimate, 1e-10);
  const double e0 = *run.trace.rows.front().sup_error;
  double kappa_pow = 1.0;
  for (const TraceRow& row : run.trace.rows) {
    EXPECT_LE(*row.sup_error, kappa_pow * e0 + 1e-8);
    kappa_pow *= kappa;
  }
}

TEST(FaPi, ErrorBoundHoldsWithGenuineApproximation) {
  Rng rng(157);
  int pairs = 0;
  while (pairs < 6) {
    RandomGameParams params;
    params.num_states = 10;
    params.max_actions = 2;
    params.discount = 0.5;
    const GameModel game = random_game(params, rng);
    const StateFeatureScheme scheme = random_features(10, 4, rng);
    // Infinite rollout makes kappa_fa independent of delta_fv, so the rate
    // is guaranteed below one at the minimal lookahead.
    const Depth m = Depth::infinite();
    const int h = min_lookahead(0.5, m);
    const Value jstar = HighPrecisionJStar(game);

    FaOptions options;
    options.reference = jstar;
    const FaRunResult run =
        fa_pi(game, scheme, Eigen::VectorXd::Zero(4), m, h, 25, options);
    ASSERT_TRUE(run.bound.valid);
    const double kappa = run.bound.kappa_fa;
    EXPECT_NEAR(kappa, kappa_fa(0.5, m, h, build_projection(scheme).delta_fv),
                1e-15);
    const double slack = run.bound.asymptotic_bound + 1e-6;
    const double e0 = *run.trace.rows.front().sup_error;
    double kappa_pow = 1.0;
    for (const TraceRow& row : run.trace.rows) {
      EXPECT_LE(*row.sup_error, kappa_pow * e0 + slack) << "iter " << row.iter;
      kappa_pow *= kappa;
    }
    const Value last = scheme.phi * run.theta_trace.back();
    EXPECT_LE(sup_dist(last, jstar), kappa_pow * e0 + slack);
    ++pairs;
  }
}

TEST(FaPi, BoundReportFlagsDivergentRates) {
  Rng rng(163);
  RandomGameParams params;
  params.num_states = 6;
  params.discount = 0.9;
  const GameModel game = random_game(params, rng);
  // m = 0, H = 1 never satisfies the rate condition at alpha = 0.9.
  const FaRunResult run = fa_pi(game, IdentityScheme(6),
                                Eigen::VectorXd::Zero(6), Depth::finite(0), 1, 3);
  EXPECT_FALSE(run.bound.valid);
  EXPECT_GE(run.bound.kappa_fa, 1.0);
  EXPECT_TRUE(std::isinf(run.bound.asymptotic_bound));

  FaOptions strict;
  strict.strict = true;
  try {
    fa_pi(game, IdentityScheme(6), Eigen::VectorXd::Zero(6), Depth::finite(0),
          1, 3, strict);
    FAIL() << "expected ParameterError";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("AssumptionViolated"),
              std::string::npos);
  }
}

TEST(EstimateDeltaApp, EmptyInputAndIdentityFeatures) {
  Rng rng(167);
  RandomGameParams params;
  params.num_states = 5;
  const GameModel game = random_game(params, rng);
  const ProjectionOperator identity = build_projection(IdentityScheme(5));
  EXPECT_DOUBLE_EQ(estimate_delta_app(game, identity, {}), 0.0);

  std::vector<PolicyPair> policies = {UniformPolicy(game)};
  EXPECT_LE(estimate_delta_app(game, identity, policies), 1e-12);

  // A genuine approximation has positive residual, and adding policies can
  // only raise the max.
  const StateFeatureScheme coarse = random_features(5, 2, rng);
  const ProjectionOperator proj = build_projection(coarse);
  const double one = estimate_delta_app(game, proj, policies);
  policies.push_back(PurePolicy(game, std::vector<int>(5, 0), std::vector<int>(5, 0)));
  const double two = estimate_delta_app(game, proj, policies);
  EXPECT_GE(two, one);
}

TEST(FaPi, InputValidation) {
  Rng rng(173);
  RandomGameParams params;
  params.num_states = 5;
  const GameModel game = random_game(params, rng);
  const StateFeatureScheme scheme = IdentityScheme(5);
  EXPECT_THROW(fa_pi(game, scheme, Eigen::VectorXd::Zero(3), Depth::finite(1),
                     1, 2),
               DimensionError);
  EXPECT_THROW(fa_pi(game, scheme, Eigen::VectorXd::Zero(5), Depth::finite(1),
                     1, -1),
               ParameterError);
  StateFeatureScheme wrong = IdentityScheme(6);
  EXPECT_THROW(fa_pi(game, wrong, Eigen::VectorXd::Zero(6), Depth::finite(1),
                     1, 2),
               DimensionError);
  const ProjectionOperator proj = build_projection(scheme);
  EXPECT_THROW(fa_pi_step(game, scheme, proj, Eigen::VectorXd::Zero(2),
                          Depth::finite(1), 1),
               DimensionError);
}

}  // namespace
}  // namespace mgplan_test
