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

#include "mgplan/model_rl.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mgplan/parallel.hpp"
#include "mgplan/rng.hpp"

namespace mgplan {

EmpiricalModel generative_sample(const GameModel& game, long long n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("ParameterOutOfRange: sample count N must be >= 1");

  const int triples = game.num_triples();
  std::vector<std::vector<std::pair<int, long long>>> counts(triples);
  parallel_for(triples, [&](int t) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(t)));
    const auto reach = game.reach_at(t);
    std::vector<double> probs(reach.size());
    for (std::size_t r = 0; r < reach.size(); ++r) probs[r] = reach[r].prob;
    std::vector<long long> hits(reach.size(), 0);
    for (long long i = 0; i < n; ++i) ++hits[rng.categorical(probs)];
    auto& row = counts[t];
    for (std::size_t r = 0; r < reach.size(); ++r)
      if (hits[r] > 0) row.emplace_back(reach[r].successor, hits[r]);
  });

  GameDescription desc;
  desc.num_states = game.num_states();
  desc.discount = game.discount();
  desc.actions_max.resize(game.num_states());
  desc.actions_min.resize(game.num_states());
  for (int s = 0; s < game.num_states(); ++s) {
    desc.actions_max[s] = game.actions_max(s);
    desc.actions_min[s] = game.actions_min(s);
  }
  for (int t = 0; t < triples; ++t) {
    const int s = game.triple_state(t);
    const int u = game.triple_u(t);
    const int v = game.triple_v(t);
    desc.rewards.push_back({s, u, v, game.reward_at(t)});
    for (const auto& [successor, hit] : counts[t])
      desc.transitions.push_back(
          {s, u, v, successor, static_cast<double>(hit) / static_cast<double>(n)});
  }
  // Integer-ratio rows sum to 1 up to summation rounding only.
  return EmpiricalModel{GameModel::FromDescription(desc, 1e-9), n, std::move(counts)};
}

PlanOnModelResult plan_on_model(const EmpiricalModel& empirical, Depth m, int h,
                                double eps_opt, int max_iters) {
  if (!(eps_opt > 0.0)) throw ParameterError("ParameterOutOfRange: eps_opt must be > 0");
  if (h < 1) throw ParameterError("ParameterOutOfRange: lookahead H must be >= 1");
  if (max_iters < 1) throw ParameterError("ParameterOutOfRange: max_iters must be >= 1");
  const GameModel& model = empirical.induced;
  const double alpha = model.discount();

  PlannerConfig config;
  config.m = m;
  config.lookahead_h = h;
  config.max_iters = max_iters;
  // ||J^{mu,nu} - J*||_inf <= 2 alpha^{H-1} ||T V - V||_inf / (1-alpha) for
  // the lookahead policy of V, so this residual threshold certifies eps_opt.
  config.stop_tol = eps_opt * (1.0 - alpha) / (2.0 * std::pow(alpha, h - 1));
  config.strict_assumption = true;
  PlannerResult run = generalized_pi(model, config);
  if (run.outcome != PlanOutcome::kConverged)
    throw NumericalError("MaxItersExceeded: planning residual did not certify eps_opt=" +
                         std::to_string(eps_opt) + " within " + std::to_string(max_iters) +
                         " iterations");
  PlanOnModelResult result;
  result.policy = run.policy;
  result.v_hat = run.value;
  result.detail = std::move(run);
  return result;
}

LearnedPolicyError evaluate_learned_policy(const GameModel& true_game,
                                           const PolicyPair& policy) {
  check_policy(true_game, policy);
  const Value j_pol = exact_policy_value(true_game, policy);
  const QTable q_pol = q_from_v(true_game, j_pol);

  PlannerConfig config;
  config.stop_tol = 1e-13;
  config.max_iters = 2000000;
  const PlannerResult ref = value_iteration(true_game, config);
  const QTable q_star = q_from_v(true_game, ref.value);

  double q_error = 0.0;
  for (int t = 0; t < true_game.num_triples(); ++t)
    q_error = std::max(q_error, std::abs(q_pol.values[t] - q_star.values[t]));
  return {q_error, sup_dist(j_pol, ref.value)};
}

SampleBoundReport sample_bound(const SampleBoundInputs& in) {
  if (!(in.alpha > 0.0) || !(in.alpha < 1.0))
    throw ParameterError("ParameterOutOfRange: discount must lie in (0, 1)");
  const double eps_ceiling = 1.0 / std::sqrt(1.0 - in.alpha);
  if (!(in.eps > 0.0) || in.eps > eps_ceiling)
    throw ParameterError(
        "ParameterOutOfRange: eps must lie in (0, 1/sqrt(1-alpha)] = (0, " +
        std::to_string(eps_ceiling) + "]");
  if (!(in.delta > 0.0) || !(in.delta < 1.0))
    throw ParameterError("ParameterOutOfRange: delta must lie in (0, 1)");
  if (!(in.c > 0.0)) throw ParameterError("ParameterOutOfRange: c must be > 0");
  if (in.num_states < 1 || in.num_u < 1 || in.num_v < 1)
    throw ParameterError("ParameterOutOfRange: |S|, |U|, |V| must be >= 1");
  if (in.h < 1) throw ParameterError("ParameterOutOfRange: lookahead H must be >= 1");
  if (!(in.eps_opt > 0.0)) throw ParameterError("ParameterOutOfRange: eps_opt must be > 0");
  if (in.d < 1 || in.r < 1 || in.a_max < 1)
    throw ParameterError("ParameterOutOfRange: d, r, a_max must be >= 1");

  SampleBoundReport report;
  report.inputs = in;

  const double one_minus = 1.0 - in.alpha;
  const double log_arg = in.c * static_cast<double>(in.num_states) *
                         static_cast<double>(in.num_u) * static_cast<double>(in.num_v) /
                         (one_minus * one_minus * in.delta);
  const double n_real =
      in.c * in.alpha * std::log(log_arg) / (one_minus * one_minus * one_minus * in.eps * in.eps);
  report.n_required = std::max(1LL, static_cast<long long>(std::ceil(n_real)));

  report.alpha_tilde = check_assumption1(in.alpha, in.m, in.h).kappa;
  const double opt_arg = in.eps_opt * one_minus;
  report.c_ops_applicable =
      !in.m.is_infinite() && report.alpha_tilde < 1.0 && opt_arg < 1.0;
  if (report.c_ops_applicable) {
    const double d = in.d;
    const double bracket =
        d * (2.0 * in.r + 1.0) + d * d * d / 3.0 + static_cast<double>(in.r) * in.a_max * in.a_max * d;
    report.c_ops = in.c * in.m.steps() * in.h * std::log(1.0 / opt_arg) /
                   std::log(1.0 / report.alpha_tilde) * bracket;
  } else {
    report.c_ops = 0.0;
  }
  return report;
}

}  // namespace mgplan
