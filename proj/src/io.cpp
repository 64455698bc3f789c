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

#include "mgplan/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace mgplan {
namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("JSON parse failure: ") + e.what());
  }
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw IoError(std::string("missing field \"") + name + "\"");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw IoError(where + " must be an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw IoError(where + " must be a number");
  return j.get<double>();
}

std::vector<int> as_int_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw IoError(where + " must be an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_int(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd as_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw IoError(where + " must be an array");
  Eigen::VectorXd out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = as_double(j[i], where + "[" + std::to_string(i) + "]");
  return out;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw IoError(where + " must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd out(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      throw IoError(row_where + " must be an array of " + std::to_string(cols) + " numbers");
    for (std::size_t c = 0; c < cols; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_double(j[r][c], row_where + "[" + std::to_string(c) + "]");
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fnv1a_digest(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return std::move(buf).str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

GameDescription parse_game_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw IoError("game file must be a JSON object");
  GameDescription desc;
  desc.num_states = as_int(field(j, "num_states"), "num_states");
  desc.discount = as_double(field(j, "discount"), "discount");
  desc.actions_max = as_int_array(field(j, "actions_max"), "actions_max");
  desc.actions_min = as_int_array(field(j, "actions_min"), "actions_min");

  const json& rewards = field(j, "rewards");
  if (!rewards.is_array()) throw IoError("rewards must be an array");
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const std::string where = "rewards[" + std::to_string(i) + "]";
    const json& e = rewards[i];
    if (!e.is_array() || e.size() != 4) throw IoError(where + " must be [s,u,v,g]");
    desc.rewards.push_back({as_int(e[0], where), as_int(e[1], where), as_int(e[2], where),
                            as_double(e[3], where)});
  }
  const json& transitions = field(j, "transitions");
  if (!transitions.is_array()) throw IoError("transitions must be an array");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const json& e = transitions[i];
    if (!e.is_array() || e.size() != 5) throw IoError(where + " must be [s,u,v,s',p]");
    desc.transitions.push_back({as_int(e[0], where), as_int(e[1], where), as_int(e[2], where),
                                as_int(e[3], where), as_double(e[4], where)});
  }
  return desc;
}

std::string game_to_json(const GameDescription& desc) {
  json j;
  j["num_states"] = desc.num_states;
  j["discount"] = desc.discount;
  j["actions_max"] = desc.actions_max;
  j["actions_min"] = desc.actions_min;
  json rewards = json::array();
  for (const RewardEntry& e : desc.rewards)
    rewards.push_back(json::array({e.s, e.u, e.v, e.value}));
  j["rewards"] = std::move(rewards);
  json transitions = json::array();
  for (const TransitionEntry& e : desc.transitions)
    transitions.push_back(json::array({e.s, e.u, e.v, e.successor, e.prob}));
  j["transitions"] = std::move(transitions);
  return j.dump(2) + "\n";
}

GameModel load_game(const std::string& path) {
  try {
    return validate_game(parse_game_json(read_text_file(path)));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

StateFeatureScheme parse_features_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw IoError("feature file must be a JSON object");
  StateFeatureScheme scheme;
  const int d = as_int(field(j, "d"), "d");
  scheme.phi = as_matrix(field(j, "phi"), "phi");
  if (scheme.phi.cols() != d)
    throw IoError("phi rows carry " + std::to_string(scheme.phi.cols()) +
                  " entries but d = " + std::to_string(d));
  scheme.anchors = as_int_array(field(j, "anchors"), "anchors");
  return scheme;
}

std::string features_to_json(const StateFeatureScheme& scheme) {
  json j;
  j["d"] = scheme.phi.cols();
  j["phi"] = matrix_to_json(scheme.phi);
  j["anchors"] = scheme.anchors;
  return j.dump(2) + "\n";
}

LinearGameDescription parse_linear_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw IoError("linear-model file must be a JSON object");
  LinearGameDescription desc;
  desc.num_states = as_int(field(j, "num_states"), "num_states");
  desc.discount = as_double(field(j, "discount"), "discount");
  desc.actions_max = as_int_array(field(j, "actions_max"), "actions_max");
  desc.actions_min = as_int_array(field(j, "actions_min"), "actions_min");
  desc.dim = as_int(field(j, "d"), "d");

  const json& features = field(j, "features");
  if (!features.is_array()) throw IoError("features must be an array");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = "features[" + std::to_string(i) + "]";
    const json& e = features[i];
    if (!e.is_array() || e.size() != 4) throw IoError(where + " must be [s,u,v,[f...]]");
    desc.features.emplace_back(
        TripleKey{as_int(e[0], where), as_int(e[1], where), as_int(e[2], where)},
        as_vector(e[3], where + "[3]"));
  }
  desc.theta = as_vector(field(j, "theta"), "theta");
  desc.eta = as_matrix(field(j, "eta"), "eta");
  const json& anchors = field(j, "anchors");
  if (!anchors.is_array()) throw IoError("anchors must be an array");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const std::string where = "anchors[" + std::to_string(i) + "]";
    const json& e = anchors[i];
    if (!e.is_array() || e.size() != 3) throw IoError(where + " must be [s,u,v]");
    desc.anchors.push_back({as_int(e[0], where), as_int(e[1], where), as_int(e[2], where)});
  }
  return desc;
}

std::string linear_to_json(const LinearGameDescription& desc) {
  json j;
  j["num_states"] = desc.num_states;
  j["discount"] = desc.discount;
  j["actions_max"] = desc.actions_max;
  j["actions_min"] = desc.actions_min;
  j["d"] = desc.dim;
  json features = json::array();
  for (const auto& [key, phi] : desc.features)
    features.push_back(json::array({key.s, key.u, key.v, vector_to_json(phi)}));
  j["features"] = std::move(features);
  j["theta"] = vector_to_json(desc.theta);
  j["eta"] = matrix_to_json(desc.eta);
  json anchors = json::array();
  for (const TripleKey& a : desc.anchors) anchors.push_back(json::array({a.s, a.u, a.v}));
  j["anchors"] = std::move(anchors);
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const ConvergenceTrace& trace) {
  std::string out = "iter,sup_error,bellman_residual,ratio\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.iter);
    out += ',';
    if (row.sup_error) out += format_double(*row.sup_error);
    out += ',';
    out += format_double(row.bellman_residual);
    out += ',';
    if (row.ratio) out += format_double(*row.ratio);
    out += '\n';
  }
  return out;
}

std::string compare_to_csv(std::span<const CompareRow> rows) {
  std::string out =
      "algo,iters,operator_applications,matrix_games_solved,wall_ms,final_residual\n";
  for (const CompareRow& row : rows) {
    out += row.algo;
    out += ',';
    out += std::to_string(row.iters);
    out += ',';
    out += std::to_string(row.operator_applications);
    out += ',';
    out += std::to_string(row.matrix_games_solved);
    out += ',';
    out += format_double(row.wall_ms);
    out += ',';
    out += format_double(row.final_residual);
    out += '\n';
  }
  return out;
}

std::string solution_to_json(const PlannerResult& result) {
  json j;
  j["value"] = vector_to_json(result.value);
  json mu = json::array();
  for (const Eigen::VectorXd& row : result.policy.mu) mu.push_back(vector_to_json(row));
  json nu = json::array();
  for (const Eigen::VectorXd& row : result.policy.nu) nu.push_back(vector_to_json(row));
  j["policy"] = json{{"mu", std::move(mu)}, {"nu", std::move(nu)}};
  j["termination"] = result.trace.termination;
  j["iterations"] = result.trace.rows.empty() ? 0 : result.trace.rows.back().iter;
  j["operator_applications"] = result.operator_applications;
  j["matrix_games_solved"] = result.matrix_games_solved;
  j["final_residual"] =
      result.trace.rows.empty() ? 0.0 : result.trace.rows.back().bellman_residual;
  return j.dump(2) + "\n";
}

std::string manifest_to_json(const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["config"] = parse_text(manifest.config_json.empty() ? "{}" : manifest.config_json);
  j["seed"] = manifest.seed;
  j["input_digests"] = manifest.input_digests;
  j["outputs"] = manifest.outputs;
  j["version"] = manifest.version;
  return j.dump(2) + "\n";
}

}  // namespace mgplan
