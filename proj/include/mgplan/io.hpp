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
// File formats: game / feature / linear-model JSON, trace and comparison
// CSV, solution JSON, and the run manifest. Floating-point values in CSV are
// written with 17 significant digits so every double round-trips exactly.

#ifndef MGPLAN_IO_HPP_
#define MGPLAN_IO_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgplan/game.hpp"
#include "mgplan/linear_fa.hpp"
#include "mgplan/linear_game.hpp"
#include "mgplan/planners.hpp"

namespace mgplan {

inline constexpr char kVersionString[] = "mgplan 0.1.0";

/// Shortest exact decimal: printf %.17g.
std::string format_double(double x);

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_digest(std::string_view bytes);

/// Whole-file read/write; failures throw IoError naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Game files. Parsing throws IoError carrying the JSON parser's line/column
/// diagnostics or a schema complaint; validation of the parsed description is
/// validate_game's job.
GameDescription parse_game_json(const std::string& text);
std::string game_to_json(const GameDescription& desc);
GameModel load_game(const std::string& path);

/// State-feature files: {"d": d, "phi": [[row]...], "anchors": [states]}.
StateFeatureScheme parse_features_json(const std::string& text);
std::string features_to_json(const StateFeatureScheme& scheme);

/// Linear-model files: {"num_states", "discount", "actions_max",
/// "actions_min", "d", "features": [[s,u,v,[f_1..f_d]]...], "theta",
/// "eta": [[row]...], "anchors": [[s,u,v]...]}.
LinearGameDescription parse_linear_json(const std::string& text);
std::string linear_to_json(const LinearGameDescription& desc);

/// Trace CSV: header iter,sup_error,bellman_residual,ratio; optional fields
/// are left empty.
std::string trace_to_csv(const ConvergenceTrace& trace);

struct CompareRow {
  std::string algo;
  long long iters;
  long long operator_applications;
  long long matrix_games_solved;
  double wall_ms;
  double final_residual;
};

/// Comparison CSV: header algo,iters,operator_applications,
/// matrix_games_solved,wall_ms,final_residual.
std::string compare_to_csv(std::span<const CompareRow> rows);

/// Final value/policy artifact of a planner run.
std::string solution_to_json(const PlannerResult& result);

/// Reproducibility record. config_json holds the full option snapshot as a
/// JSON object string; reruns with an identical manifest rebuild every output
/// byte-for-byte (wall-clock fields in comparison tables are the sole
/// documented exception).
struct RunManifest {
  std::string command;
  std::string config_json;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a
  std::vector<std::string> outputs;
  std::string version = kVersionString;
};

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace mgplan

#endif  // MGPLAN_IO_HPP_
