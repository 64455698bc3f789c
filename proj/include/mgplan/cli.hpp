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
// Command implementations behind the mgplan executable. Each command is a
// plain function over an option struct so tests can drive it directly; the
// binary only parses flags. Exit codes: 0 success/converged, 1 file or model
// errors, 2 cycling, 3 iteration cap, 64 usage errors. The environment
// variable MGPI_SEED overrides the seed of any command that takes one.

#ifndef MGPLAN_CLI_HPP_
#define MGPLAN_CLI_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mgplan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFileError = 1;
inline constexpr int kExitCycling = 2;
inline constexpr int kExitMaxIters = 3;
inline constexpr int kExitUsage = 64;

/// Parses a rollout depth: a nonnegative integer or "INFINITE"/"inf".
/// Returns false on malformed input. Encoded as int with -1 for INFINITE so
/// option structs stay aggregate.
bool parse_depth_flag(const std::string& text, int* m_out);

struct GenOptions {
  std::uint64_t seed = 1;
  int num_states = 5;
  int max_actions = 2;
  double sparsity = 0.5;
  int min_support = 1;
  double discount = 0.9;
  std::string out;            // required game-file path
  std::string manifest_out;   // defaults to out + ".manifest.json"
};

struct SolveOptions {
  std::string game_path;      // required
  std::string algo = "gpi";   // vi | gpi | naive | hk
  int m = 1;                  // rollout depth; -1 = INFINITE
  int lookahead_h = 1;
  double tol = 1e-9;
  int max_iters = 100000;
  std::string trace_out;      // optional trace CSV path
  std::string solution_out;   // optional value/policy JSON path
  std::string manifest_out;   // defaults next to the first output
  std::uint64_t seed = 0;     // manifest bookkeeping; solving is deterministic
  int threads = 1;
};

struct CompareOptions {
  std::string game_path;              // required
  std::vector<std::string> configs;   // "algo[:m=<depth>][:H=<h>]" specs
  double tol = 1e-9;
  int max_iters = 100000;
  std::string out;                    // required comparison CSV path
  std::string manifest_out;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RlOptions {
  std::string game_path;              // required
  std::vector<long long> n_values;    // samples per tuple; one run per entry
  int m = 1;                          // -1 = INFINITE is rejected here
  int lookahead_h = 1;
  double eps_opt = 1e-6;
  double eps = 0.1;                   // bound-report inputs
  double delta = 0.1;
  double c = 1.0;
  std::uint64_t seed = 1;
  std::string report_out;             // required report JSON path
  std::string manifest_out;
  int threads = 1;
};

int cmd_gen(const GenOptions& options, std::ostream& err);
int cmd_solve(const SolveOptions& options, std::ostream& err);
int cmd_compare(const CompareOptions& options, std::ostream& err);
int cmd_rl(const RlOptions& options, std::ostream& err);

}  // namespace mgplan

#endif  // MGPLAN_CLI_HPP_
