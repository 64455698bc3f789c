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
// Stochastic policy iteration: unbiased noisy returns from simulated
// trajectories, least-squares fits restricted to visited states, and
// stochastic-approximation averaging of the weight vector.

#ifndef MGPLAN_STOCHASTIC_HPP_
#define MGPLAN_STOCHASTIC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mgplan/bellman.hpp"
#include "mgplan/game.hpp"
#include "mgplan/linear_fa.hpp"
#include "mgplan/planners.hpp"
#include "mgplan/rng.hpp"

namespace mgplan {

/// Step-size schedule gamma_k. Harmonic(c, p) is gamma_k = c/(k+1)^p and is
/// valid only for p in (1/2, 1] and c > 0, the Robbins-Monro range where
/// the sum diverges and the squared sum converges. Explicit sequences must
/// have every entry in (0, 1].
class StepSchedule {
 public:
  static StepSchedule Harmonic(double c, double p);
  static StepSchedule Explicit(std::vector<double> gammas);

  /// gamma_k for k >= 0; an explicit schedule must cover k.
  double gamma(int k) const;

  /// True when the schedule defines gamma_0 .. gamma_{k-1}.
  bool covers(int k) const;

 private:
  StepSchedule() = default;
  bool harmonic_ = true;
  double c_ = 1.0;
  double p_ = 1.0;
  std::vector<double> gammas_;
};

/// One iteration's noisy returns: the distinct trajectory start states D_k
/// (sorted) and the averaged return per visited state. Unvisited states
/// carry the explicit value 0, which return_at honors; the least-squares fit
/// only ever sees visited rows, so the zeros never influence the iterate.
struct TrajectoryBatch {
  std::vector<int> visited;
  std::vector<double> returns;

  double return_at(int s) const;
};

/// Averages raw per-start returns into a batch (repeated starts are averaged
/// before any fit).
TrajectoryBatch average_returns(std::span<const int> starts, std::span<const double> raw);

/// One simulated m-step return from start_state under the fixed policy pair:
/// sum_{i<m} alpha^i g(s_i,u_i,v_i) + alpha^m backed_value(s_m). With the
/// lookahead target T^{H-1}V supplied as backed_value this is a conditionally
/// unbiased sample of T^m_{mu,nu} T^{H-1} V (start_state); m = 0 reads
/// backed_value(start_state) exactly. m must be finite: an INFINITE rollout
/// has no trajectory realization.
double sample_return(const GameModel& game, const PolicyPair& pol, const Value& backed_value,
                     Depth m, int start_state, Rng& rng);

/// Minimum-norm least-squares fit of theta to the batch: the Moore-Penrose
/// pseudoinverse of the visited-row feature matrix applied to the returns.
/// Rank collapse is not an error; the pseudoinverse defines the answer.
Eigen::VectorXd fit_visited(const Eigen::MatrixXd& phi, const TrajectoryBatch& batch);

struct Assumption2Report {
  double lhs;
  bool satisfied;
};

/// lhs = delta_fv_prime alpha^{m+H-1}(1+alpha)/(1-alpha)
///       + 2 alpha^{H-1}/(1-alpha), with alpha^INFINITE := 0.
Assumption2Report check_assumption2(double alpha, Depth m, int h, double delta_fv_prime);

struct StochasticBoundReport {
  bool reported = false;        // true when the run tracked the quantities below
  double delta_fv_prime = 0.0;  // max over iterations of ||Phi (P_1 Phi)^+ P_2||_inf
  double delta_app_prime = 0.0; // max over iterations of ||J_k - M_k J_k||_inf
  Assumption2Report assumption2{0.0, false};
};

struct StochasticPiOptions {
  /// Exploring-starts distribution over states; every entry must be positive.
  /// Defaults to uniform.
  std::optional<Eigen::VectorXd> start_distribution;
  /// Trajectory starts drawn per iteration. 0 selects the full sweep: every
  /// state starts exactly one trajectory, the zero-variance-coverage limit.
  int starts_per_iter = 0;
  std::optional<Value> reference;  // J* for trace sup_error / ratio columns
  bool report_bounds = false;      // track delta'_FV / delta'_app per iteration
};

struct StochasticRunResult {
  std::vector<Eigen::VectorXd> theta_trace;  // theta_0 .. theta_K
  ConvergenceTrace trace;
  StochasticBoundReport bounds;
};

/// Noisy generalized policy iteration, K iterations. Per iteration: the
/// H-step lookahead policy of Phi theta_k is computed exactly; each
/// trajectory start yields one sampled m-step return bootstrapped with the
/// exact T^{H-1}(Phi theta_k); returns are averaged per visited state, fitted
/// by minimum-norm least squares over the visited feature rows, and blended
/// as theta_{k+1} = (1-gamma_k) theta_k + gamma_k theta_hat. Trajectory
/// streams are split deterministically from the master seed per (iteration,
/// start index), so results are bit-for-bit reproducible and independent of
/// the thread count.
StochasticRunResult stochastic_pi(const GameModel& game, const StateFeatureScheme& scheme,
                                  const Eigen::VectorXd& theta0, Depth m, int h,
                                  const StepSchedule& schedule, int iterations,
                                  std::uint64_t seed,
                                  const StochasticPiOptions& options = {});

}  // namespace mgplan

#endif  // MGPLAN_STOCHASTIC_HPP_
