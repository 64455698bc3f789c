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

#include "mgplan/linear_game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "mgplan/matrix_game.hpp"
#include "mgplan/parallel.hpp"

namespace mgplan {
namespace {

constexpr double kLinearTol = 1e-10;
constexpr double kRankTol = 1e-10;

std::string Triple(const TripleKey& t) {
  return "(s=" + std::to_string(t.s) + ",u=" + std::to_string(t.u) +
         ",v=" + std::to_string(t.v) + ")";
}

}  // namespace

LinearGameModel LinearGameModel::FromDescription(const LinearGameDescription& desc) {
  std::vector<std::string> bad;
  if (desc.num_states <= 0) bad.push_back("BadIndex: num_states must be positive");
  if (desc.dim <= 0) bad.push_back("BadIndex: feature dimension d must be positive");
  if (static_cast<int>(desc.actions_max.size()) != desc.num_states ||
      static_cast<int>(desc.actions_min.size()) != desc.num_states)
    bad.push_back("BadActionCount: actions_max/actions_min must have one entry per state");
  if (!bad.empty()) throw ModelError(std::move(bad));
  for (int s = 0; s < desc.num_states; ++s)
    if (desc.actions_max[s] < 1 || desc.actions_min[s] < 1)
      bad.push_back("BadActionCount: state " + std::to_string(s) +
                    " needs at least one action per player");
  if (desc.theta.size() != desc.dim)
    bad.push_back("BadIndex: theta has " + std::to_string(desc.theta.size()) +
                  " entries, expected d = " + std::to_string(desc.dim));
  if (desc.eta.rows() != desc.num_states || desc.eta.cols() != desc.dim)
    bad.push_back("BadIndex: eta must be |S| x d");
  if (!bad.empty()) throw ModelError(std::move(bad));

  // Local triple indexing (the base model does the same arithmetic later).
  std::vector<int> offset(desc.num_states + 1, 0);
  for (int s = 0; s < desc.num_states; ++s)
    offset[s + 1] = offset[s] + desc.actions_max[s] * desc.actions_min[s];
  const int num_triples = offset.back();
  auto triple_ok = [&](const TripleKey& t) {
    return t.s >= 0 && t.s < desc.num_states && t.u >= 0 &&
           t.u < desc.actions_max[t.s] && t.v >= 0 && t.v < desc.actions_min[t.s];
  };
  auto index_of = [&](const TripleKey& t) {
    return offset[t.s] + t.u * desc.actions_min[t.s] + t.v;
  };

  std::vector<Eigen::VectorXd> features(num_triples);
  std::vector<char> present(num_triples, 0);
  for (const auto& [key, phi] : desc.features) {
    if (!triple_ok(key)) {
      bad.push_back("BadIndex: feature entry " + Triple(key) + " out of range");
      continue;
    }
    if (phi.size() != desc.dim) {
      bad.push_back("BadIndex: feature vector at " + Triple(key) + " has " +
                    std::to_string(phi.size()) + " entries, expected " +
                    std::to_string(desc.dim));
      continue;
    }
    const int t = index_of(key);
    if (present[t]) {
      bad.push_back("DuplicateEntry: feature for " + Triple(key) + " given more than once");
      continue;
    }
    present[t] = 1;
    features[t] = phi;
  }
  for (int t = 0; t < num_triples; ++t)
    if (!present[t]) {
      bad.push_back("MissingTriple: no feature vector for triple index " +
                    std::to_string(t));
    }
  if (!bad.empty()) throw ModelError(std::move(bad));

  // Induce the tabular base game: g = phi'theta (clamped into [0,1] when
  // within tolerance), P(.|s,u,v) = eta phi with tiny negatives clamped and
  // exact zeros dropped so reach sets are exact supports.
  GameDescription base;
  base.num_states = desc.num_states;
  base.discount = desc.discount;
  base.actions_max = desc.actions_max;
  base.actions_min = desc.actions_min;
  for (int s = 0; s < desc.num_states; ++s) {
    for (int u = 0; u < desc.actions_max[s]; ++u) {
      for (int v = 0; v < desc.actions_min[s]; ++v) {
        const TripleKey key{s, u, v};
        const Eigen::VectorXd& phi = features[index_of(key)];
        double g = phi.dot(desc.theta);
        if (g < 0.0 && g >= -kLinearTol) g = 0.0;
        if (g > 1.0 && g <= 1.0 + kLinearTol) g = 1.0;
        base.rewards.push_back({s, u, v, g});
        const Eigen::VectorXd row = desc.eta * phi;
        double sum = 0.0;
        for (int succ = 0; succ < desc.num_states; ++succ) {
          double p = row[succ];
          if (p < 0.0) {
            if (p < -kLinearTol) {
              bad.push_back("NonstochasticRow: eta phi" + Triple(key) + " has entry " +
                            std::to_string(p) + " at s'=" + std::to_string(succ));
              continue;
            }
            p = 0.0;
          }
          sum += p;
          if (p > 0.0) base.transitions.push_back({s, u, v, succ, p});
        }
        if (std::abs(sum - 1.0) > kLinearTol)
          bad.push_back("NonstochasticRow: eta phi" + Triple(key) + " sums to " +
                        std::to_string(sum));
      }
    }
  }
  if (!bad.empty()) throw ModelError(std::move(bad));

  LinearGameModel lg;
  // The clamping above can move a row sum by at most |S| * kLinearTol.
  lg.base_ = GameModel::FromDescription(base, kLinearTol * (desc.num_states + 2));
  lg.dim_ = desc.dim;
  lg.features_ = std::move(features);
  lg.theta_ = desc.theta;
  lg.eta_ = desc.eta;

  std::set<std::array<int, 3>> seen;
  for (const TripleKey& a : desc.anchors) {
    if (!triple_ok(a)) throw ParameterError("anchor " + Triple(a) + " out of range");
    if (!seen.insert({a.s, a.u, a.v}).second)
      throw ParameterError("anchor " + Triple(a) + " repeated");
  }
  if (static_cast<int>(desc.anchors.size()) < desc.dim)
    throw RankError("RankDeficient: need at least d anchor tuples");
  lg.anchors_ = desc.anchors;
  Eigen::MatrixXd anchor_features(desc.anchors.size(), desc.dim);
  for (std::size_t i = 0; i < desc.anchors.size(); ++i)
    anchor_features.row(i) = lg.features_[index_of(desc.anchors[i])];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(anchor_features);
  if (svd.singularValues().minCoeff() <= kRankTol)
    throw RankError("RankDeficient: anchor features have numerical rank below d");
  return lg;
}

long long LinearGameModel::anchor_reach_sum() const {
  long long total = 0;
  for (const TripleKey& a : anchors_)
    total += static_cast<long long>(base_->reach(a.s, a.u, a.v).size());
  return total;
}

Eigen::VectorXd LinearGameModel::beta_for_value(const Value& v) const {
  if (v.size() != base_->num_states())
    throw DimensionError("value vector has " + std::to_string(v.size()) +
                         " entries, game has " + std::to_string(base_->num_states()));
  return theta_ + base_->discount() * eta_.transpose() * v;
}

Eigen::MatrixXd assemble_local_matrix(const LinearGameModel& lg,
                                      const Eigen::VectorXd& beta, int s) {
  if (beta.size() != lg.dim())
    throw DimensionError("beta has " + std::to_string(beta.size()) +
                         " entries, model has d = " + std::to_string(lg.dim()));
  const GameModel& base = lg.base();
  Eigen::MatrixXd a(base.actions_max(s), base.actions_min(s));
  for (int u = 0; u < base.actions_max(s); ++u)
    for (int v = 0; v < base.actions_min(s); ++v) a(u, v) = lg.feature(s, u, v).dot(beta);
  return a;
}

namespace {

// Shared backup skeleton: targets at the anchors from a per-state bootstrap
// value z, then the least-squares refit over anchor features. z values are
// cached so each distinct successor is evaluated once per pass.
template <typename ZFn>
Eigen::VectorXd BackupWithZ(const LinearGameModel& lg, ZFn&& z_of_state) {
  const GameModel& base = lg.base();
  const auto& anchors = lg.anchors();
  std::map<int, double> z_cache;
  auto z = [&](int s) {
    auto it = z_cache.find(s);
    if (it == z_cache.end()) it = z_cache.emplace(s, z_of_state(s)).first;
    return it->second;
  };
  Eigen::MatrixXd f(anchors.size(), lg.dim());
  Eigen::VectorXd target(anchors.size());
  const double alpha = base.discount();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const TripleKey& a = anchors[i];
    f.row(i) = lg.feature(a.s, a.u, a.v);
    double next = 0.0;
    for (const Transition& tr : base.reach(a.s, a.u, a.v)) next += tr.prob * z(tr.successor);
    target[i] = base.reward(a.s, a.u, a.v) + alpha * next;
  }
  return (f.transpose() * f).ldlt().solve(f.transpose() * target);
}

double BilinearValue(const Eigen::MatrixXd& a, const Eigen::VectorXd& mu,
                     const Eigen::VectorXd& nu) {
  return mu.dot(a * nu);
}

}  // namespace

Eigen::VectorXd beta_backup(const LinearGameModel& lg, const Eigen::VectorXd& beta,
                            BackupMode mode, const PolicyPair* pol,
                            long long* games_solved) {
  if (beta.size() != lg.dim())
    throw DimensionError("beta has " + std::to_string(beta.size()) +
                         " entries, model has d = " + std::to_string(lg.dim()));
  if (mode == BackupMode::kPolicy) {
    if (pol == nullptr)
      throw ParameterError("policy-mode beta_backup requires a policy");
    check_policy(lg.base(), *pol);
    return BackupWithZ(lg, [&](int s) {
      return BilinearValue(assemble_local_matrix(lg, beta, s), pol->mu[s], pol->nu[s]);
    });
  }
  return BackupWithZ(lg, [&](int s) {
    if (games_solved != nullptr) ++*games_solved;
    return solve_matrix_game(assemble_local_matrix(lg, beta, s)).value;
  });
}

Value induced_value(const LinearGameModel& lg, const Eigen::VectorXd& beta) {
  const int n = lg.base().num_states();
  Value v(n);
  parallel_for(n, [&](int s) {
    v[s] = solve_matrix_game(assemble_local_matrix(lg, beta, s)).value;
  });
  return v;
}

LinearPiResult linear_generalized_pi(const LinearGameModel& lg,
                                     const Eigen::VectorXd& beta0, Depth m, int h,
                                     int iterations, const LinearPiOptions& options) {
  if (h < 1) throw ParameterError("lookahead H must be >= 1");
  if (iterations < 0) throw ParameterError("iterations must be >= 0");
  if (beta0.size() != lg.dim())
    throw DimensionError("beta0 has " + std::to_string(beta0.size()) +
                         " entries, model has d = " + std::to_string(lg.dim()));
  const GameModel& base = lg.base();
  const double alpha = base.discount();

  LinearPiResult result;
  result.beta_trace.push_back(beta0);
  Eigen::VectorXd beta = beta0;

  // States whose strategies the policy passes need: successors of anchors,
  // or every state for the INFINITE fixed-point solve.
  std::set<int> needed_set;
  if (m.is_infinite()) {
    for (int s = 0; s < base.num_states(); ++s) needed_set.insert(s);
  } else {
    for (const TripleKey& a : lg.anchors())
      for (const Transition& tr : base.reach(a.s, a.u, a.v)) needed_set.insert(tr.successor);
  }
  const std::vector<int> needed(needed_set.begin(), needed_set.end());

  auto record = [&](const Eigen::VectorXd& beta_k, const Eigen::VectorXd& beta_next_bellman,
                    int k) {
    if (!options.with_trace) return;
    // W_k = induced_value(beta_k) = T V_k; one more Bellman backup gives
    // A_{T V_k}, whose induced value is T W_k, so the row is a true Bellman
    // residual for W_k.
    const Value w = induced_value(lg, beta_k);
    const Value tw = induced_value(lg, beta_next_bellman);
    result.diagnostic_games_solved += 2LL * base.num_states();
    TraceRow row;
    row.iter = k;
    row.bellman_residual = sup_dist(tw, w);
    if (options.reference) {
      row.sup_error = sup_dist(w, *options.reference);
      if (!result.trace.rows.empty() && result.trace.rows.back().sup_error &&
          *result.trace.rows.back().sup_error > 0.0)
        row.ratio = *row.sup_error / *result.trace.rows.back().sup_error;
    }
    result.trace.rows.push_back(std::move(row));
  };

  for (int k = 0; k < iterations; ++k) {
    // H-1 Bellman-mode backups carry A_{V_k} to A_{T^{H-1} V_k}.
    Eigen::VectorXd btilde = beta;
    Eigen::VectorXd first_backup;
    for (int i = 0; i < h - 1; ++i) {
      btilde = beta_backup(lg, btilde, BackupMode::kBellman, nullptr,
                           &result.matrix_games_solved);
      if (i == 0) first_backup = btilde;
    }
    if (h == 1 && options.with_trace) {
      first_backup = beta_backup(lg, btilde, BackupMode::kBellman, nullptr,
                                 &result.diagnostic_games_solved);
    }
    record(beta, first_backup, k);

    // Policy extraction: the lookahead strategies at every needed state.
    std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> strategies;
    for (int s : needed) {
      const MatrixGameSolution sol = solve_matrix_game(assemble_local_matrix(lg, btilde, s));
      ++result.matrix_games_solved;
      strategies.emplace(s, std::make_pair(sol.row_strategy, sol.col_strategy));
    }
    auto policy_z = [&](const Eigen::VectorXd& b, int s) {
      const auto& [mu, nu] = strategies.at(s);
      return BilinearValue(assemble_local_matrix(lg, b, s), mu, nu);
    };

    if (m.is_infinite()) {
      // beta* = theta + alpha eta' L beta*, L(s,:) = sum_{u,v} mu_u nu_v
      // phi(s,u,v)'; alpha L eta' is the policy transition matrix, so the
      // system is nonsingular for every valid model.
      Eigen::MatrixXd l = Eigen::MatrixXd::Zero(base.num_states(), lg.dim());
      for (int s = 0; s < base.num_states(); ++s) {
        const auto& [mu, nu] = strategies.at(s);
        for (int u = 0; u < base.actions_max(s); ++u) {
          if (mu[u] == 0.0) continue;
          for (int v = 0; v < base.actions_min(s); ++v) {
            const double w = mu[u] * nu[v];
            if (w == 0.0) continue;
            l.row(s) += w * lg.feature(s, u, v).transpose();
          }
        }
      }
      const Eigen::MatrixXd system =
          Eigen::MatrixXd::Identity(lg.dim(), lg.dim()) - alpha * lg.transition_weights().transpose() * l;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
      if (!lu.isInvertible())
        throw NumericalError("singular beta fixed-point system in INFINITE rollout");
      beta = lu.solve(lg.reward_weights());
    } else {
      beta = btilde;
      for (int j = 0; j < m.steps(); ++j)
        beta = BackupWithZ(lg, [&](int s) { return policy_z(beta, s); });
    }
    result.beta_trace.push_back(beta);
  }
  // Final diagnostic row describes the last iterate.
  if (options.with_trace && iterations >= 0) {
    Eigen::VectorXd last_backup = beta_backup(lg, beta, BackupMode::kBellman, nullptr,
                                              &result.diagnostic_games_solved);
    record(beta, last_backup, iterations);
  }
  result.trace.termination = "completed";
  return result;
}

CostReport cost_model(int d, int r, int a_max, int anchor_count, long long reach_sum,
                      int m, int h) {
  if (d < 1 || r < 1 || a_max < 1 || anchor_count < 1 || reach_sum < 1 || m < 1 || h < 1)
    throw ParameterError("ParameterOutOfRange: cost_model arguments must be >= 1");
  CostReport report;
  const long long passes = static_cast<long long>(h) - 1 + m;
  report.backup_ops = passes * anchor_count * static_cast<long long>(d) * (2LL * r + 1);
  report.lsq_ops = passes * (static_cast<long long>(d) * d * d / 3);
  report.matrix_game_count = static_cast<long long>(h) * reach_sum;
  report.total_per_iteration =
      report.backup_ops + report.lsq_ops +
      report.matrix_game_count * static_cast<long long>(r) * a_max * a_max * d;
  return report;
}

}  // namespace mgplan
