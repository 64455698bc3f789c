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

#include "mgplan/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "mgplan/io.hpp"
#include "mgplan/model_rl.hpp"
#include "mgplan/parallel.hpp"
#include "mgplan/planners.hpp"
#include "mgplan/random_games.hpp"
#include "mgplan/rng.hpp"

namespace mgplan {
namespace {

using nlohmann::json;

/// MGPI_SEED, when set, overrides any seed flag. Malformed values are usage
/// errors surfaced by the caller.
std::optional<std::uint64_t> env_seed_override(std::ostream& err, bool* usage_error) {
  const char* text = std::getenv("MGPI_SEED");
  if (text == nullptr) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long parsed = std::strtoull(text, &end, 10);
  if (errno != 0 || end == text || *end != '\0') {
    err << "mgplan: MGPI_SEED is not an unsigned integer: " << text << "\n";
    *usage_error = true;
    return std::nullopt;
  }
  return static_cast<std::uint64_t>(parsed);
}

Depth depth_from_flag(int m) {
  return m < 0 ? Depth::infinite() : Depth::finite(m);
}

std::string default_manifest_path(const std::string& primary_output) {
  return primary_output + ".manifest.json";
}

int report_error(std::ostream& err, const std::exception& e, int code) {
  err << "mgplan: " << e.what() << "\n";
  return code;
}

/// Dispatch table shared by solve and compare.
PlannerResult run_algo(const GameModel& game, const std::string& algo,
                       const PlannerConfig& config) {
  if (algo == "vi") return value_iteration(game, config);
  if (algo == "gpi") return generalized_pi(game, config);
  if (algo == "naive") return naive_pi(game, config);
  if (algo == "hk") return hoffman_karp(game, config);
  throw ParameterError("unknown algorithm \"" + algo + "\" (expected vi|gpi|naive|hk)");
}

/// Compare config specs: "algo[:m=<depth>][:H=<h>]".
void parse_compare_spec(const std::string& spec, std::string* algo, PlannerConfig* config) {
  std::size_t pos = spec.find(':');
  *algo = spec.substr(0, pos);
  while (pos != std::string::npos) {
    const std::size_t start = pos + 1;
    pos = spec.find(':', start);
    const std::string part = spec.substr(start, pos == std::string::npos ? pos : pos - start);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw ParameterError("bad compare spec part \"" + part + "\" in \"" + spec + "\"");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key == "m") {
      int m = 0;
      if (!parse_depth_flag(value, &m))
        throw ParameterError("bad rollout depth \"" + value + "\" in \"" + spec + "\"");
      config->m = depth_from_flag(m);
    } else if (key == "H") {
      try {
        config->lookahead_h = std::stoi(value);
      } catch (const std::exception&) {
        throw ParameterError("bad lookahead \"" + value + "\" in \"" + spec + "\"");
      }
    } else {
      throw ParameterError("unknown compare spec key \"" + key + "\" in \"" + spec + "\"");
    }
  }
}

int outcome_exit_code(PlanOutcome outcome) {
  switch (outcome) {
    case PlanOutcome::kConverged:
      return kExitOk;
    case PlanOutcome::kCycling:
      return kExitCycling;
    case PlanOutcome::kMaxIters:
      return kExitMaxIters;
  }
  return kExitFileError;
}

}  // namespace

bool parse_depth_flag(const std::string& text, int* m_out) {
  if (text == "INFINITE" || text == "infinite" || text == "inf") {
    *m_out = -1;
    return true;
  }
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size() || value < 0) return false;
    *m_out = value;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

int cmd_gen(const GenOptions& options, std::ostream& err) {
  bool usage_error = false;
  const std::uint64_t seed = env_seed_override(err, &usage_error).value_or(options.seed);
  if (usage_error) return kExitUsage;
  if (options.out.empty()) {
    err << "mgplan: gen requires an output path\n";
    return kExitUsage;
  }
  try {
    RandomGameParams params;
    params.num_states = options.num_states;
    params.max_actions = options.max_actions;
    params.sparsity = options.sparsity;
    params.min_support = options.min_support;
    params.discount = options.discount;
    Rng rng(seed);
    const GameDescription desc = random_game_description(params, rng);
    validate_game(desc);  // never emit a file that will not load back
    const std::string payload = game_to_json(desc);
    write_text_file(options.out, payload);

    RunManifest manifest;
    manifest.command = "gen";
    manifest.config_json = json{{"num_states", params.num_states},
                                {"max_actions", params.max_actions},
                                {"sparsity", params.sparsity},
                                {"min_support", params.min_support},
                                {"discount", params.discount}}
                               .dump();
    manifest.seed = seed;
    manifest.outputs = {options.out};
    const std::string manifest_path =
        options.manifest_out.empty() ? default_manifest_path(options.out) : options.manifest_out;
    write_text_file(manifest_path, manifest_to_json(manifest));
    return kExitOk;
  } catch (const ParameterError& e) {
    return report_error(err, e, kExitUsage);
  } catch (const std::exception& e) {
    return report_error(err, e, kExitFileError);
  }
}

int cmd_solve(const SolveOptions& options, std::ostream& err) {
  bool usage_error = false;
  const std::uint64_t seed = env_seed_override(err, &usage_error).value_or(options.seed);
  if (usage_error) return kExitUsage;
  if (options.game_path.empty()) {
    err << "mgplan: solve requires a game file\n";
    return kExitUsage;
  }
  try {
    set_max_threads(options.threads);
    const GameModel game = load_game(options.game_path);

    PlannerConfig config;
    config.m = depth_from_flag(options.m);
    config.lookahead_h = options.lookahead_h;
    config.stop_tol = options.tol;
    config.max_iters = options.max_iters;
    const PlannerResult result = run_algo(game, options.algo, config);

    RunManifest manifest;
    manifest.command = "solve";
    manifest.config_json = json{{"algo", options.algo},
                                {"m", options.m},
                                {"H", options.lookahead_h},
                                {"tol", options.tol},
                                {"max_iters", options.max_iters},
                                {"threads", options.threads}}
                               .dump();
    manifest.seed = seed;
    manifest.input_digests[options.game_path] = fnv1a_digest(read_text_file(options.game_path));
    if (!options.trace_out.empty()) {
      write_text_file(options.trace_out, trace_to_csv(result.trace));
      manifest.outputs.push_back(options.trace_out);
    }
    if (!options.solution_out.empty()) {
      write_text_file(options.solution_out, solution_to_json(result));
      manifest.outputs.push_back(options.solution_out);
    }
    if (!manifest.outputs.empty()) {
      const std::string manifest_path = options.manifest_out.empty()
                                            ? default_manifest_path(manifest.outputs.front())
                                            : options.manifest_out;
      write_text_file(manifest_path, manifest_to_json(manifest));
    }
    return outcome_exit_code(result.outcome);
  } catch (const ParameterError& e) {
    return report_error(err, e, kExitUsage);
  } catch (const std::exception& e) {
    return report_error(err, e, kExitFileError);
  }
}

int cmd_compare(const CompareOptions& options, std::ostream& err) {
  bool usage_error = false;
  const std::uint64_t seed = env_seed_override(err, &usage_error).value_or(options.seed);
  if (usage_error) return kExitUsage;
  if (options.configs.empty()) {
    err << "mgplan: compare requires at least one planner config\n";
    return kExitUsage;
  }
  if (options.game_path.empty() || options.out.empty()) {
    err << "mgplan: compare requires a game file and an output path\n";
    return kExitUsage;
  }
  try {
    set_max_threads(options.threads);
    const GameModel game = load_game(options.game_path);

    std::vector<CompareRow> rows;
    for (const std::string& spec : options.configs) {
      std::string algo;
      PlannerConfig config;
      config.stop_tol = options.tol;
      config.max_iters = options.max_iters;
      parse_compare_spec(spec, &algo, &config);

      const auto start = std::chrono::steady_clock::now();
      const PlannerResult result = run_algo(game, algo, config);
      const auto stop = std::chrono::steady_clock::now();

      CompareRow row;
      row.algo = spec;
      row.iters = result.trace.rows.empty() ? 0 : result.trace.rows.back().iter;
      row.operator_applications = result.operator_applications;
      row.matrix_games_solved = result.matrix_games_solved;
      row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      row.final_residual =
          result.trace.rows.empty() ? 0.0 : result.trace.rows.back().bellman_residual;
      rows.push_back(std::move(row));
    }
    write_text_file(options.out, compare_to_csv(rows));

    RunManifest manifest;
    manifest.command = "compare";
    manifest.config_json = json{{"configs", options.configs},
                                {"tol", options.tol},
                                {"max_iters", options.max_iters},
                                {"threads", options.threads}}
                               .dump();
    manifest.seed = seed;
    manifest.input_digests[options.game_path] = fnv1a_digest(read_text_file(options.game_path));
    manifest.outputs = {options.out};
    const std::string manifest_path =
        options.manifest_out.empty() ? default_manifest_path(options.out) : options.manifest_out;
    write_text_file(manifest_path, manifest_to_json(manifest));
    return kExitOk;
  } catch (const ParameterError& e) {
    return report_error(err, e, kExitUsage);
  } catch (const std::exception& e) {
    return report_error(err, e, kExitFileError);
  }
}

int cmd_rl(const RlOptions& options, std::ostream& err) {
  bool usage_error = false;
  const std::uint64_t seed = env_seed_override(err, &usage_error).value_or(options.seed);
  if (usage_error) return kExitUsage;
  if (options.game_path.empty() || options.report_out.empty()) {
    err << "mgplan: rl requires a game file and a report path\n";
    return kExitUsage;
  }
  if (options.n_values.empty()) {
    err << "mgplan: rl requires at least one --N value\n";
    return kExitUsage;
  }
  if (options.m < 0) {
    err << "mgplan: rl requires a finite rollout depth\n";
    return kExitUsage;
  }
  try {
    set_max_threads(options.threads);
    const GameModel game = load_game(options.game_path);
    const Depth m = Depth::finite(options.m);

    json runs = json::array();
    for (std::size_t i = 0; i < options.n_values.size(); ++i) {
      const long long n = options.n_values[i];
      const auto start = std::chrono::steady_clock::now();
      // The same master seed for every N keeps runs paired: smaller-N counts
      // are prefixes of larger-N counts on each tuple's stream.
      const EmpiricalModel empirical = generative_sample(game, n, seed);
      const PlanOnModelResult plan =
          plan_on_model(empirical, m, options.lookahead_h, options.eps_opt);
      const LearnedPolicyError error = evaluate_learned_policy(game, plan.policy);
      const auto stop = std::chrono::steady_clock::now();
      runs.push_back(json{
          {"n", n},
          {"q_error", error.q_error},
          {"v_error", error.v_error},
          {"plan_iterations",
           plan.detail.trace.rows.empty() ? 0 : plan.detail.trace.rows.back().iter},
          {"wall_ms", std::chrono::duration<double, std::milli>(stop - start).count()}});
    }

    long long num_u = 0, num_v = 0;
    int a_max = 1, r_max = 1;
    for (int s = 0; s < game.num_states(); ++s) {
      num_u += game.actions_max(s);
      num_v += game.actions_min(s);
      a_max = std::max({a_max, game.actions_max(s), game.actions_min(s)});
    }
    for (int t = 0; t < game.num_triples(); ++t)
      r_max = std::max(r_max, static_cast<int>(game.reach_at(t).size()));
    SampleBoundInputs bound_in;
    bound_in.alpha = game.discount();
    bound_in.eps = options.eps;
    bound_in.delta = options.delta;
    bound_in.num_states = game.num_states();
    bound_in.num_u = num_u;
    bound_in.num_v = num_v;
    bound_in.c = options.c;
    bound_in.m = m;
    bound_in.h = options.lookahead_h;
    bound_in.eps_opt = options.eps_opt;
    bound_in.d = 1;
    bound_in.r = r_max;
    bound_in.a_max = a_max;
    const SampleBoundReport bound = sample_bound(bound_in);

    json report;
    report["game"] = options.game_path;
    report["seed"] = seed;
    report["m"] = options.m;
    report["H"] = options.lookahead_h;
    report["eps_opt"] = options.eps_opt;
    report["runs"] = std::move(runs);
    report["bound"] = json{{"n_required", bound.n_required},
                           {"c_ops", bound.c_ops},
                           {"c_ops_applicable", bound.c_ops_applicable},
                           {"alpha_tilde", bound.alpha_tilde},
                           {"c", bound.inputs.c},
                           {"eps", bound.inputs.eps},
                           {"delta", bound.inputs.delta},
                           {"scope", "stated for linear turn-based Markov games"}};
    report["version"] = kVersionString;
    write_text_file(options.report_out, report.dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "rl";
    manifest.config_json = json{{"n_values", options.n_values},
                                {"m", options.m},
                                {"H", options.lookahead_h},
                                {"eps_opt", options.eps_opt},
                                {"eps", options.eps},
                                {"delta", options.delta},
                                {"c", options.c},
                                {"threads", options.threads}}
                               .dump();
    manifest.seed = seed;
    manifest.input_digests[options.game_path] = fnv1a_digest(read_text_file(options.game_path));
    manifest.outputs = {options.report_out};
    const std::string manifest_path = options.manifest_out.empty()
                                          ? default_manifest_path(options.report_out)
                                          : options.manifest_out;
    write_text_file(manifest_path, manifest_to_json(manifest));
    return kExitOk;
  } catch (const ParameterError& e) {
    return report_error(err, e, kExitUsage);
  } catch (const std::exception& e) {
    return report_error(err, e, kExitFileError);
  }
}

}  // namespace mgplan
