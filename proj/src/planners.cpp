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

#include "mgplan/planners.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace mgplan {
namespace {

constexpr double kInnerMdpTol = 1e-12;
constexpr long long kInnerMdpCap = 1000000;

void CheckConfig(const GameModel& game, const PlannerConfig& config) {
  if (config.stop_tol <= 0.0) throw ParameterError("stop_tol must be positive");
  if (config.lookahead_h < 1) throw ParameterError("lookahead H must be >= 1");
  if (config.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (config.initial_v && config.initial_v->size() != game.num_states())
    throw DimensionError("initial_v has " + std::to_string(config.initial_v->size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  if (config.reference && config.reference->size() != game.num_states())
    throw DimensionError("reference has " + std::to_string(config.reference->size()) +
                         " entries, game has " + std::to_string(game.num_states()));
}

Value InitialV(const GameModel& game, const PlannerConfig& config) {
  return config.initial_v ? *config.initial_v : Value::Zero(game.num_states());
}

// Appends the iteration-k row; ratio is filled from the previous sup_error.
void Record(ConvergenceTrace& trace, int k, const std::optional<Value>& reference,
            const Value& v, double residual) {
  TraceRow row;
  row.iter = k;
  row.bellman_residual = residual;
  if (reference) {
    row.sup_error = sup_dist(v, *reference);
    if (!trace.rows.empty() && trace.rows.back().sup_error &&
        *trace.rows.back().sup_error > 0.0)
      row.ratio = *row.sup_error / *trace.rows.back().sup_error;
  }
  trace.rows.push_back(std::move(row));
}

// Exact byte-level key of a greedy policy pair; deterministic solver output
// makes recurrent policies hit identical keys.
std::vector<double> PolicyKey(const PolicyPair& pol) {
  std::vector<double> key;
  for (const auto& d : pol.mu) key.insert(key.end(), d.data(), d.data() + d.size());
  key.push_back(std::numeric_limits<double>::infinity());  // side separator
  for (const auto& d : pol.nu) key.insert(key.end(), d.data(), d.data() + d.size());
  return key;
}

}  // namespace

PlannerResult value_iteration(const GameModel& game, const PlannerConfig& config) {
  CheckConfig(game, config);
  PlannerResult result;
  Value v = InitialV(game, config);
  for (int k = 0; k < config.max_iters; ++k) {
    auto [tv, greedy] = apply_bellman(game, v);
    result.operator_applications += 1;
    result.matrix_games_solved += game.num_states();
    const double residual = sup_dist(tv, v);
    Record(result.trace, k, config.reference, v, residual);
    result.value = std::move(tv);
    result.policy = std::move(greedy);
    if (residual <= config.stop_tol) {
      result.trace.termination = "converged";
      result.outcome = PlanOutcome::kConverged;
      return result;
    }
    v = result.value;
  }
  result.trace.termination = "max_iters";
  result.outcome = PlanOutcome::kMaxIters;
  return result;
}

PlannerResult generalized_pi(const GameModel& game, const PlannerConfig& config) {
  CheckConfig(game, config);
  if (config.strict_assumption) {
    const RateReport rate = check_assumption1(game.discount(), config.m, config.lookahead_h);
    if (!rate.assumption1_satisfied)
      throw ParameterError("AssumptionViolated: Assumption 1 lhs = " +
                           std::to_string(rate.assumption1_lhs) + " >= 1 for this (m,H)");
  }
  PlannerResult result;
  Value v = InitialV(game, config);
  for (int k = 0; k < config.max_iters; ++k) {
    const LookaheadResult look = lookahead(game, v, config.lookahead_h);
    result.operator_applications += config.lookahead_h;
    result.matrix_games_solved +=
        static_cast<long long>(config.lookahead_h) * game.num_states();
    const double residual = sup_dist(look.one_step, v);
    Record(result.trace, k, config.reference, v, residual);
    result.policy = look.policy;
    if (residual <= config.stop_tol) {
      result.value = look.one_step;
      result.trace.termination = "converged";
      result.outcome = PlanOutcome::kConverged;
      return result;
    }
    v = rollout(game, look.policy, look.backed_value, config.m);
    result.operator_applications += config.m.is_infinite() ? 1 : config.m.steps();
    result.value = v;
  }
  result.trace.termination = "max_iters";
  result.outcome = PlanOutcome::kMaxIters;
  return result;
}

PlannerResult naive_pi(const GameModel& game, const PlannerConfig& config) {
  CheckConfig(game, config);
  PlannerResult result;
  Value v = InitialV(game, config);
  // Per visited greedy policy pair: the smallest residual seen so far. A
  // revisit that has not strictly improved on it cannot be on a contracting
  // path, which is the divergence signature (true cycles revisit with equal
  // residuals; convergent runs strictly shrink them).
  std::map<std::vector<double>, double> best_residual;
  for (int k = 0; k < config.max_iters; ++k) {
    auto [tv, greedy] = apply_bellman(game, v);
    result.operator_applications += 1;
    result.matrix_games_solved += game.num_states();
    const double residual = sup_dist(tv, v);
    Record(result.trace, k, config.reference, v, residual);
    result.policy = greedy;
    if (residual <= config.stop_tol) {
      result.value = std::move(tv);
      result.trace.termination = "converged";
      result.outcome = PlanOutcome::kConverged;
      return result;
    }
    auto [it, fresh] = best_residual.try_emplace(PolicyKey(greedy), residual);
    if (!fresh) {
      if (residual >= it->second) {
        result.value = std::move(tv);
        result.trace.termination = "cycling";
        result.outcome = PlanOutcome::kCycling;
        return result;
      }
      it->second = residual;
    }
    v = rollout(game, greedy, v, config.m);
    result.operator_applications += config.m.is_infinite() ? 1 : config.m.steps();
    result.value = v;
  }
  result.trace.termination = "max_iters";
  result.outcome = PlanOutcome::kMaxIters;
  return result;
}

PlannerResult hoffman_karp(const GameModel& game, const PlannerConfig& config) {
  CheckConfig(game, config);
  PlannerResult result;
  Value v = InitialV(game, config);
  for (int k = 0; k < config.max_iters; ++k) {
    auto [tv, greedy] = apply_bellman(game, v);
    result.operator_applications += 1;
    result.matrix_games_solved += game.num_states();
    const double residual = sup_dist(tv, v);
    Record(result.trace, k, config.reference, v, residual);
    result.policy = greedy;
    if (residual <= config.stop_tol) {
      result.value = std::move(tv);
      result.trace.termination = "converged";
      result.outcome = PlanOutcome::kConverged;
      return result;
    }
    // Minimizer's MDP under the frozen greedy mu, solved by iterating T_mu.
    Value w = std::move(tv);
    for (long long inner = 0;; ++inner) {
      if (inner >= kInnerMdpCap)
        throw NumericalError("hoffman_karp inner MDP solve exceeded its sweep cap");
      MinApplyResult step = apply_min_operator(game, greedy.mu, w);
      result.operator_applications += 1;
      const double change = sup_dist(step.value, w);
      w = std::move(step.value);
      if (change <= kInnerMdpTol) break;
    }
    v = std::move(w);
    result.value = v;
  }
  result.trace.termination = "max_iters";
  result.outcome = PlanOutcome::kMaxIters;
  return result;
}

RateReport check_assumption1(double alpha, Depth m, int h) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("ParameterOutOfRange: alpha must lie in (0,1)");
  if (h < 1) throw ParameterError("ParameterOutOfRange: H must be >= 1");
  const double alpha_m = m.alpha_pow(alpha);
  const double alpha_h1 = std::pow(alpha, h - 1);
  RateReport report;
  report.assumption1_lhs = alpha_h1 + 2.0 * (1.0 + alpha_m) * alpha_h1 / (1.0 - alpha);
  report.kappa = alpha_h1 + (1.0 + alpha_m) * (alpha_h1 / (1.0 - alpha)) * (1.0 + alpha);
  report.assumption1_satisfied = report.assumption1_lhs < 1.0;
  return report;
}

int min_lookahead(double alpha, Depth m) {
  for (int h = 1;; ++h) {
    if (check_assumption1(alpha, m, h).assumption1_satisfied) return h;
  }
}

}  // namespace mgplan
