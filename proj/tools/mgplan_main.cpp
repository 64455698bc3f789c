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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mgplan/cli.hpp"

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success/converged; 1 file, parse, or model errors; "
    "2 planner cycling detected; 3 iteration cap reached; 64 usage errors. "
    "MGPI_SEED overrides any --seed flag.";

/// CLI11 validator wrapper for rollout depths ("3" or "INFINITE").
void add_depth_option(CLI::App* cmd, int* slot, const std::string& description) {
  cmd->add_option_function<std::string>(
         "--m",
         [slot](const std::string& text) {
           if (!mgplan::parse_depth_flag(text, slot))
             throw CLI::ValidationError("--m", "expected a nonnegative integer or INFINITE");
         },
         description)
      ->default_str("1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-sum Markov game planning toolkit"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  mgplan::GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a seeded random game file");
  cmd_gen->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  cmd_gen->add_option("--states", gen.num_states, "Number of states")->capture_default_str();
  cmd_gen->add_option("--actions", gen.max_actions, "Max actions per player per state")
      ->capture_default_str();
  cmd_gen->add_option("--sparsity", gen.sparsity, "Transition support: 0 deterministic, 1 full")
      ->capture_default_str();
  cmd_gen->add_option("--min-support", gen.min_support, "Minimum transition support size")
      ->capture_default_str();
  cmd_gen->add_option("--discount", gen.discount, "Discount factor in (0,1)")
      ->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "Output game JSON path")->required();
  cmd_gen->add_option("--manifest", gen.manifest_out, "Manifest path (default <out>.manifest.json)");

  mgplan::SolveOptions solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Run one planner on a game file");
  cmd_solve->add_option("game", solve.game_path, "Game JSON file")->required();
  cmd_solve->add_option("--algo", solve.algo, "Planner: vi | gpi | naive | hk")
      ->capture_default_str();
  add_depth_option(cmd_solve, &solve.m, "Rollout depth m (nonnegative integer or INFINITE)");
  cmd_solve->add_option("--H", solve.lookahead_h, "Lookahead depth H >= 1")
      ->capture_default_str();
  cmd_solve->add_option("--tol", solve.tol, "Bellman-residual stopping tolerance")
      ->capture_default_str();
  cmd_solve->add_option("--max-iters", solve.max_iters, "Iteration cap")->capture_default_str();
  cmd_solve->add_option("--trace", solve.trace_out, "Trace CSV output path");
  cmd_solve->add_option("--solution", solve.solution_out, "Value/policy JSON output path");
  cmd_solve->add_option("--manifest", solve.manifest_out, "Manifest path");
  cmd_solve->add_option("--seed", solve.seed, "Manifest seed (solving is deterministic)")
      ->capture_default_str();
  cmd_solve->add_option("--threads", solve.threads, "Worker thread cap")->capture_default_str();

  mgplan::CompareOptions compare;
  CLI::App* cmd_compare = app.add_subcommand("compare", "Run several planner configs and tabulate");
  cmd_compare->add_option("game", compare.game_path, "Game JSON file")->required();
  cmd_compare->add_option("--config", compare.configs,
                          "Planner spec algo[:m=<depth>][:H=<h>], repeatable");
  cmd_compare->add_option("--tol", compare.tol, "Bellman-residual stopping tolerance")
      ->capture_default_str();
  cmd_compare->add_option("--max-iters", compare.max_iters, "Iteration cap")
      ->capture_default_str();
  cmd_compare->add_option("--out", compare.out, "Comparison CSV output path")->required();
  cmd_compare->add_option("--manifest", compare.manifest_out, "Manifest path");
  cmd_compare->add_option("--seed", compare.seed, "Manifest seed")->capture_default_str();
  cmd_compare->add_option("--threads", compare.threads, "Worker thread cap")
      ->capture_default_str();

  mgplan::RlOptions rl;
  CLI::App* cmd_rl = app.add_subcommand("rl", "Generative-model learning and planning pipeline");
  cmd_rl->add_option("game", rl.game_path, "Game JSON file")->required();
  cmd_rl->add_option("--N", rl.n_values, "Samples per (s,u,v); repeat for a sweep")->required();
  add_depth_option(cmd_rl, &rl.m, "Rollout depth m (finite)");
  cmd_rl->add_option("--H", rl.lookahead_h, "Lookahead depth H >= 1")->capture_default_str();
  cmd_rl->add_option("--eps-opt", rl.eps_opt, "Planning optimality tolerance on the learned model")
      ->capture_default_str();
  cmd_rl->add_option("--eps", rl.eps, "Bound-report accuracy input")->capture_default_str();
  cmd_rl->add_option("--delta", rl.delta, "Bound-report failure probability")
      ->capture_default_str();
  cmd_rl->add_option("--c", rl.c, "Bound-report constant c")->capture_default_str();
  cmd_rl->add_option("--seed", rl.seed, "Master seed")->capture_default_str();
  cmd_rl->add_option("--report", rl.report_out, "Report JSON output path")->required();
  cmd_rl->add_option("--manifest", rl.manifest_out, "Manifest path");
  cmd_rl->add_option("--threads", rl.threads, "Worker thread cap")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11's own exit codes cover help (0); everything else is usage.
    return code == 0 ? mgplan::kExitOk : mgplan::kExitUsage;
  }

  if (cmd_gen->parsed()) return mgplan::cmd_gen(gen, std::cerr);
  if (cmd_solve->parsed()) return mgplan::cmd_solve(solve, std::cerr);
  if (cmd_compare->parsed()) return mgplan::cmd_compare(compare, std::cerr);
  if (cmd_rl->parsed()) return mgplan::cmd_rl(rl, std::cerr);
  return mgplan::kExitUsage;
}
