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

#include "mgplan/stochastic.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "mgplan/parallel.hpp"

namespace mgplan {

StepSchedule StepSchedule::Harmonic(double c, double p) {
  if (!(c > 0.0))
    throw ParameterError("ParameterOutOfRange: harmonic schedule needs c > 0");
  if (!(p > 0.5) || !(p <= 1.0))
    throw ParameterError(
        "ParameterOutOfRange: harmonic schedule needs p in (1/2, 1] for "
        "square-summable steps with divergent sum");
  StepSchedule s;
  s.harmonic_ = true;
  s.c_ = c;
  s.p_ = p;
  return s;
}

StepSchedule StepSchedule::Explicit(std::vector<double> gammas) {
  if (gammas.empty())
    throw ParameterError("ParameterOutOfRange: explicit schedule must be nonempty");
  for (double g : gammas)
    if (!(g > 0.0) || !(g <= 1.0))
      throw ParameterError("ParameterOutOfRange: explicit step sizes must lie in (0, 1]");
  StepSchedule s;
  s.harmonic_ = false;
  s.gammas_ = std::move(gammas);
  return s;
}

double StepSchedule::gamma(int k) const {
  if (k < 0) throw ParameterError("ParameterOutOfRange: step index must be >= 0");
  if (harmonic_) return c_ / std::pow(static_cast<double>(k) + 1.0, p_);
  if (k >= static_cast<int>(gammas_.size()))
    throw ParameterError("ParameterOutOfRange: explicit schedule has no step " +
                         std::to_string(k));
  return gammas_[k];
}

bool StepSchedule::covers(int k) const {
  return harmonic_ || k <= static_cast<int>(gammas_.size());
}

double TrajectoryBatch::return_at(int s) const {
  const auto it = std::lower_bound(visited.begin(), visited.end(), s);
  if (it == visited.end() || *it != s) return 0.0;
  return returns[static_cast<std::size_t>(it - visited.begin())];
}

TrajectoryBatch average_returns(std::span<const int> starts, std::span<const double> raw) {
  if (starts.size() != raw.size())
    throw DimensionError("starts and returns differ in length");
  std::map<int, std::pair<double, int>> acc;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    auto& slot = acc[starts[i]];
    slot.first += raw[i];
    slot.second += 1;
  }
  TrajectoryBatch batch;
  batch.visited.reserve(acc.size());
  batch.returns.reserve(acc.size());
  for (const auto& [s, slot] : acc) {
    batch.visited.push_back(s);
    batch.returns.push_back(slot.first / slot.second);
  }
  return batch;
}

double sample_return(const GameModel& game, const PolicyPair& pol, const Value& backed_value,
                     Depth m, int start_state, Rng& rng) {
  if (m.is_infinite())
    throw ParameterError("sample_return needs a finite trajectory length");
  if (start_state < 0 || start_state >= game.num_states())
    throw ParameterError("start state " + std::to_string(start_state) + " out of range");
  if (backed_value.size() != game.num_states())
    throw DimensionError("backed value has " + std::to_string(backed_value.size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  check_policy(game, pol);

  const double alpha = game.discount();
  int s = start_state;
  double total = 0.0;
  double disc = 1.0;
  std::vector<double> probs;
  for (int i = 0; i < m.steps(); ++i) {
    const Eigen::VectorXd& mu = pol.mu[s];
    const Eigen::VectorXd& nu = pol.nu[s];
    const int u = rng.categorical({mu.data(), static_cast<std::size_t>(mu.size())});
    const int v = rng.categorical({nu.data(), static_cast<std::size_t>(nu.size())});
    total += disc * game.reward(s, u, v);
    const auto reach = game.reach(s, u, v);
    probs.resize(reach.size());
    for (std::size_t r = 0; r < reach.size(); ++r) probs[r] = reach[r].prob;
    s = reach[rng.categorical(probs)].successor;
    disc *= alpha;
  }
  return total + disc * backed_value[s];
}

Eigen::VectorXd fit_visited(const Eigen::MatrixXd& phi, const TrajectoryBatch& batch) {
  if (batch.visited.empty())
    throw ParameterError("cannot fit an empty trajectory batch");
  Eigen::MatrixXd rows(batch.visited.size(), phi.cols());
  Eigen::VectorXd target(batch.visited.size());
  for (std::size_t i = 0; i < batch.visited.size(); ++i) {
    if (batch.visited[i] < 0 || batch.visited[i] >= phi.rows())
      throw DimensionError("visited state out of feature-matrix range");
    rows.row(i) = phi.row(batch.visited[i]);
    target[i] = batch.returns[i];
  }
  return rows.completeOrthogonalDecomposition().solve(target);
}

Assumption2Report check_assumption2(double alpha, Depth m, int h, double delta_fv_prime) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ParameterError("ParameterOutOfRange: discount must lie in (0, 1)");
  if (h < 1) throw ParameterError("ParameterOutOfRange: lookahead H must be >= 1");
  if (!(delta_fv_prime >= 0.0))
    throw ParameterError("ParameterOutOfRange: delta'_FV must be >= 0");
  const double ah1 = std::pow(alpha, h - 1);
  const double lhs = delta_fv_prime * m.alpha_pow(alpha) * ah1 * (1.0 + alpha) / (1.0 - alpha) +
                     2.0 * ah1 / (1.0 - alpha);
  return {lhs, lhs < 1.0};
}

StochasticRunResult stochastic_pi(const GameModel& game, const StateFeatureScheme& scheme,
                                  const Eigen::VectorXd& theta0, Depth m, int h,
                                  const StepSchedule& schedule, int iterations,
                                  std::uint64_t seed, const StochasticPiOptions& options) {
  if (h < 1) throw ParameterError("lookahead H must be >= 1");
  if (iterations < 0) throw ParameterError("iterations must be >= 0");
  if (m.is_infinite())
    throw ParameterError("stochastic rollouts need a finite trajectory length");
  if (scheme.phi.rows() != game.num_states())
    throw DimensionError("feature matrix has " + std::to_string(scheme.phi.rows()) +
                         " rows, game has " + std::to_string(game.num_states()));
  if (theta0.size() != scheme.phi.cols())
    throw DimensionError("theta0 has " + std::to_string(theta0.size()) +
                         " entries, features have d = " + std::to_string(scheme.phi.cols()));
  if (!schedule.covers(iterations))
    throw ParameterError("explicit schedule shorter than the iteration count");
  if (options.starts_per_iter < 0)
    throw ParameterError("starts_per_iter must be >= 0");

  Eigen::VectorXd p = options.start_distribution.value_or(
      Eigen::VectorXd::Constant(game.num_states(), 1.0 / game.num_states()));
  if (p.size() != game.num_states())
    throw DimensionError("start distribution has " + std::to_string(p.size()) +
                         " entries, game has " + std::to_string(game.num_states()));
  double psum = 0.0;
  for (int s = 0; s < game.num_states(); ++s) {
    if (!(p[s] > 0.0))
      throw ParameterError("exploring starts require positive mass on every state");
    psum += p[s];
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw ParameterError("start distribution must sum to 1");

  const int n = game.num_states();
  StochasticRunResult result;
  result.theta_trace.reserve(iterations + 1);
  result.theta_trace.push_back(theta0);
  Eigen::VectorXd theta = theta0;

  for (int k = 0; k < iterations; ++k) {
    const Value v = scheme.phi * theta;
    const LookaheadResult look = lookahead(game, v, h);

    TraceRow row;
    row.iter = k;
    row.bellman_residual = sup_dist(look.one_step, v);
    if (options.reference) {
      row.sup_error = sup_dist(v, *options.reference);
      if (!result.trace.rows.empty() && result.trace.rows.back().sup_error &&
          *result.trace.rows.back().sup_error > 0.0)
        row.ratio = *row.sup_error / *result.trace.rows.back().sup_error;
    }
    result.trace.rows.push_back(std::move(row));

    // Trajectory starts for this iteration.
    std::vector<int> starts;
    if (options.starts_per_iter == 0) {
      starts.resize(n);
      for (int s = 0; s < n; ++s) starts[s] = s;
    } else {
      Rng draw(Rng::mix(seed, 2ULL * static_cast<std::uint64_t>(k)));
      starts.resize(options.starts_per_iter);
      for (int j = 0; j < options.starts_per_iter; ++j)
        starts[j] = draw.categorical({p.data(), static_cast<std::size_t>(p.size())});
    }

    // One m-step return per start, each on its own deterministic stream.
    const std::uint64_t traj_seed = Rng::mix(seed, 2ULL * static_cast<std::uint64_t>(k) + 1);
    std::vector<double> raw(starts.size());
    parallel_for(static_cast<int>(starts.size()), [&](int j) {
      Rng rng(Rng::mix(traj_seed, static_cast<std::uint64_t>(j)));
      raw[j] = sample_return(game, look.policy, look.backed_value, m, starts[j], rng);
    });

    const TrajectoryBatch batch = average_returns(starts, raw);
    const Eigen::VectorXd theta_hat = fit_visited(scheme.phi, batch);
    const double gamma = schedule.gamma(k);
    theta = (1.0 - gamma) * theta + gamma * theta_hat;
    result.theta_trace.push_back(theta);

    if (options.report_bounds) {
      Eigen::MatrixXd rows(batch.visited.size(), scheme.phi.cols());
      for (std::size_t i = 0; i < batch.visited.size(); ++i)
        rows.row(i) = scheme.phi.row(batch.visited[i]);
      const Eigen::MatrixXd pinv = rows.completeOrthogonalDecomposition().pseudoInverse();
      const Eigen::MatrixXd half = scheme.phi * pinv;  // |S| x |D_k|
      result.bounds.delta_fv_prime =
          std::max(result.bounds.delta_fv_prime, half.cwiseAbs().rowwise().sum().maxCoeff());
      const Value j = exact_policy_value(game, look.policy);
      Eigen::VectorXd j_visited(batch.visited.size());
      for (std::size_t i = 0; i < batch.visited.size(); ++i)
        j_visited[i] = j[batch.visited[i]];
      result.bounds.delta_app_prime =
          std::max(result.bounds.delta_app_prime, sup_dist(j, half * j_visited));
    }
  }

  // Terminal diagnostic row for theta_K.
  {
    const Value v = scheme.phi * theta;
    const auto [tv, greedy] = apply_bellman(game, v);
    (void)greedy;
    TraceRow row;
    row.iter = iterations;
    row.bellman_residual = sup_dist(tv, v);
    if (options.reference) {
      row.sup_error = sup_dist(v, *options.reference);
      if (!result.trace.rows.empty() && result.trace.rows.back().sup_error &&
          *result.trace.rows.back().sup_error > 0.0)
        row.ratio = *row.sup_error / *result.trace.rows.back().sup_error;
    }
    result.trace.rows.push_back(std::move(row));
  }
  result.trace.termination = "completed";
  if (options.report_bounds) {
    result.bounds.reported = true;
    result.bounds.assumption2 =
        check_assumption2(game.discount(), m, h, result.bounds.delta_fv_prime);
  }
  return result;
}

}  // namespace mgplan
