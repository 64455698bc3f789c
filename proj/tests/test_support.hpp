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
// Shared test fixtures and independent oracles: hand-built games with
// closed-form values, a support-enumeration matrix-game solver, and Howard
// policy iteration for games whose minimizer is a singleton. The oracles
// deliberately share no code with the library's LP solver or planners.

#ifndef MGPLAN_TESTS_TEST_SUPPORT_HPP_
#define MGPLAN_TESTS_TEST_SUPPORT_HPP_

#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgplan/errors.hpp"
#include "mgplan/game.hpp"
#include "mgplan/planners.hpp"
#include "mgplan/rng.hpp"

namespace mgplan_test {

using namespace ::mgplan;  // NOLINT: test-only convenience

// ---------------------------------------------------------------------------
// Hand-built games with closed-form values.
// ---------------------------------------------------------------------------

// Single state, single action pair, reward 0.5, self-loop, alpha = 0.9:
// J* = 0.5 / (1 - 0.9) = 5.
inline GameDescription SingleStateSelfLoopDescription() {
  GameDescription d;
  d.num_states = 1;
  d.discount = 0.9;
  d.actions_max = {1};
  d.actions_min = {1};
  d.rewards = {{0, 0, 0, 0.5}};
  d.transitions = {{0, 0, 0, 0, 1.0}};
  return d;
}

inline GameModel SingleStateSelfLoop() {
  return validate_game(SingleStateSelfLoopDescription());
}

// Two states on a deterministic cycle, rewards (1, 0), alpha = 0.5:
// J*(0) = 1 + 0.5 J*(1) and J*(1) = 0.5 J*(0), so J* = (4/3, 2/3).
inline GameModel TwoStateCycle() {
  GameDescription d;
  d.num_states = 2;
  d.discount = 0.5;
  d.actions_max = {1, 1};
  d.actions_min = {1, 1};
  d.rewards = {{0, 0, 0, 1.0}, {1, 0, 0, 0.0}};
  d.transitions = {{0, 0, 0, 1, 1.0}, {1, 0, 0, 0, 1.0}};
  return validate_game(d);
}

// One state, 2x2 actions, rewards {0.0, 0.2, 0.4, 1.0} laid out u-major,
// deterministic self-loop on every pair.
inline GameModel TwoByTwoSingleState(double discount = 0.9) {
  GameDescription d;
  d.num_states = 1;
  d.discount = discount;
  d.actions_max = {2};
  d.actions_min = {2};
  d.rewards = {{0, 0, 0, 0.0}, {0, 0, 1, 0.2}, {0, 1, 0, 0.4}, {0, 1, 1, 1.0}};
  d.transitions = {
      {0, 0, 0, 0, 1.0}, {0, 0, 1, 0, 1.0}, {0, 1, 0, 0, 1.0}, {0, 1, 1, 0, 1.0}};
  return validate_game(d);
}

// Restricts a description to the minimizer's first action, producing a game
// that is an MDP for the maximizer.
inline GameDescription MdpReduce(GameDescription desc) {
  for (auto& count : desc.actions_min) count = 1;
  std::erase_if(desc.rewards, [](const RewardEntry& e) { return e.v != 0; });
  std::erase_if(desc.transitions, [](const TransitionEntry& e) { return e.v != 0; });
  return desc;
}

// ---------------------------------------------------------------------------
// Policies and value vectors.
// ---------------------------------------------------------------------------

inline PolicyPair PurePolicy(const GameModel& game, const std::vector<int>& us,
                             const std::vector<int>& vs) {
  PolicyPair pol;
  for (int s = 0; s < game.num_states(); ++s) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(game.actions_max(s));
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(game.actions_min(s));
    mu(us[s]) = 1.0;
    nu(vs[s]) = 1.0;
    pol.mu.push_back(std::move(mu));
    pol.nu.push_back(std::move(nu));
  }
  return pol;
}

inline PolicyPair UniformPolicy(const GameModel& game) {
  PolicyPair pol;
  for (int s = 0; s < game.num_states(); ++s) {
    pol.mu.push_back(Eigen::VectorXd::Constant(game.actions_max(s),
                                               1.0 / game.actions_max(s)));
    pol.nu.push_back(Eigen::VectorXd::Constant(game.actions_min(s),
                                               1.0 / game.actions_min(s)));
  }
  return pol;
}

inline Value RandomValue(int n, double lo, double hi, Rng& rng) {
  Value v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

// J* at tolerance 1e-12 via plain value iteration.
inline Value HighPrecisionJStar(const GameModel& game) {
  PlannerConfig config;
  config.stop_tol = 1e-12;
  config.max_iters = 2000000;
  PlannerResult result = value_iteration(game, config);
  if (result.outcome != PlanOutcome::kConverged)
    throw NumericalError("reference solve did not converge");
  return result.value;
}

// ---------------------------------------------------------------------------
// Support-enumeration matrix-game oracle.
// ---------------------------------------------------------------------------

struct OracleSolution {
  double value;
  Eigen::VectorXd row_strategy;
  Eigen::VectorXd col_strategy;
};

// Solves max_x min_y x'Ay by scanning square support pairs and solving the
// payoff-equalization systems. Every matrix game owns a square kernel whose
// equalized mixtures are optimal, so the scan is complete; the tolerance
// ladder only exists to absorb floating-point degeneracy.
inline OracleSolution SupportEnumerationSolve(const Eigen::MatrixXd& a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  for (const double tol : {1e-9, 1e-8, 1e-7, 1e-6, 1e-5}) {
    for (int k = 1; k <= std::min(m, n); ++k) {
      for (std::uint32_t im = 1; im < (1u << m); ++im) {
        if (std::popcount(im) != k) continue;
        std::vector<int> rows;
        for (int i = 0; i < m; ++i)
          if (im & (1u << i)) rows.push_back(i);
        for (std::uint32_t jm = 1; jm < (1u << n); ++jm) {
          if (std::popcount(jm) != k) continue;
          std::vector<int> cols;
          for (int j = 0; j < n; ++j)
            if (jm & (1u << j)) cols.push_back(j);

          // Row mixture x on `rows` equalizing the payoff v across `cols`.
          Eigen::MatrixXd mx = Eigen::MatrixXd::Zero(k + 1, k + 1);
          Eigen::VectorXd bx = Eigen::VectorXd::Zero(k + 1);
          for (int jj = 0; jj < k; ++jj) {
            for (int ii = 0; ii < k; ++ii) mx(jj, ii) = a(rows[ii], cols[jj]);
            mx(jj, k) = -1.0;
          }
          mx.row(k).head(k).setOnes();
          bx(k) = 1.0;
          const Eigen::VectorXd zx = mx.fullPivLu().solve(bx);
          if ((mx * zx - bx).lpNorm<Eigen::Infinity>() > 1e-9 * scale) continue;

          // Column mixture y on `cols` equalizing the payoff w across `rows`.
          Eigen::MatrixXd my = Eigen::MatrixXd::Zero(k + 1, k + 1);
          Eigen::VectorXd by = Eigen::VectorXd::Zero(k + 1);
          for (int ii = 0; ii < k; ++ii) {
            for (int jj = 0; jj < k; ++jj) my(ii, jj) = a(rows[ii], cols[jj]);
            my(ii, k) = -1.0;
          }
          my.row(k).head(k).setOnes();
          by(k) = 1.0;
          const Eigen::VectorXd zy = my.fullPivLu().solve(by);
          if ((my * zy - by).lpNorm<Eigen::Infinity>() > 1e-9 * scale) continue;

          const double v = zx(k);
          const double w = zy(k);
          if (std::abs(v - w) > tol * scale) continue;
          if (zx.head(k).minCoeff() < -tol) continue;
          if (zy.head(k).minCoeff() < -tol) continue;

          Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
          Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
          for (int ii = 0; ii < k; ++ii) x(rows[ii]) = std::max(0.0, zx(ii));
          for (int jj = 0; jj < k; ++jj) y(cols[jj]) = std::max(0.0, zy(jj));
          x /= x.sum();
          y /= y.sum();

          // Off-support optimality: x guarantees v against every column, y
          // concedes at most v against every row.
          const Eigen::VectorXd col_payoff = a.transpose() * x;
          const Eigen::VectorXd row_payoff = a * y;
          if (col_payoff.minCoeff() < v - tol * scale) continue;
          if (row_payoff.maxCoeff() > v + tol * scale) continue;

          return {0.5 * (v + w), std::move(x), std::move(y)};
        }
      }
    }
  }
  throw NumericalError("support enumeration found no equilibrium kernel");
}

// ---------------------------------------------------------------------------
// Howard policy-iteration oracle for singleton-minimizer games.
// ---------------------------------------------------------------------------

inline Value HowardMdpValue(const GameModel& game) {
  const int n = game.num_states();
  for (int s = 0; s < n; ++s)
    if (game.actions_min(s) != 1)
      throw std::logic_error("HowardMdpValue requires a singleton minimizer");

  const auto q_value = [&](const Value& j, int s, int u) {
    double q = game.reward(s, u, 0);
    for (const Transition& tr : game.reach(s, u, 0))
      q += game.discount() * tr.prob * j(tr.successor);
    return q;
  };

  std::vector<int> act(n, 0);
  for (int sweep = 0; sweep < 10000; ++sweep) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd g(n);
    for (int s = 0; s < n; ++s) {
      g(s) = game.reward(s, act[s], 0);
      for (const Transition& tr : game.reach(s, act[s], 0))
        p(s, tr.successor) += tr.prob;
    }
    const Value j = (Eigen::MatrixXd::Identity(n, n) - game.discount() * p)
                        .fullPivLu()
                        .solve(g);
    bool improved = false;
    for (int s = 0; s < n; ++s) {
      int best = act[s];
      double best_q = q_value(j, s, act[s]);
      for (int u = 0; u < game.actions_max(s); ++u) {
        const double q = q_value(j, s, u);
        if (q > best_q + 1e-12) {
          best_q = q;
          best = u;
        }
      }
      if (best != act[s]) {
        act[s] = best;
        improved = true;
      }
    }
    if (!improved) return j;
  }
  throw NumericalError("Howard policy iteration failed to settle");
}

// ---------------------------------------------------------------------------
// Small statistics and scratch-file helpers.
// ---------------------------------------------------------------------------

// Least-squares slope of log(y) against log(x); all entries must be positive.
inline double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("mgplan_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Sets (or clears, with nullptr) an environment variable for one scope.
class EnvVarGuard {
 public:
  EnvVarGuard(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value != nullptr)
      ::setenv(name, value, 1);
    else
      ::unsetenv(name);
  }
  ~EnvVarGuard() {
    if (old_)
      ::setenv(name_.c_str(), old_->c_str(), 1);
    else
      ::unsetenv(name_.c_str());
  }
  EnvVarGuard(const EnvVarGuard&) = delete;
  EnvVarGuard& operator=(const EnvVarGuard&) = delete;

 private:
  std::string name_;
  std::optional<std::string> old_;
};

}  // namespace mgplan_test

#endif  // MGPLAN_TESTS_TEST_SUPPORT_HPP_
