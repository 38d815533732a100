// Copyright 2026 The mecplace Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MECPLACE_SERIALIZE_HPP
#define MECPLACE_SERIALIZE_HPP

// JSON documents for instances and solutions. Layout (version 1):
//
//   instance: { "version": 1,
//               "failure_model": { "vnf_failure": f, "pm_failure": f },
//               "mecs": [ { "id", "cpu", "ram", "uplink", "downlink" } ... ],
//               "requests": [ { "id", "cpu", "ram", "uplink", "downlink",
//                               "failure_threshold", "reward",
//                               "upf_chain": [ "NAT", ... ] } ... ],
//               "replicas": [ int ... ] }            // optional on input
//
//   solution: { "version": 1, "x": [[0|1 ...] ...], "y": [0|1 ...] }

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mecplace/model.hpp"

namespace mecplace {

inline constexpr int kFormatVersion = 1;

nlohmann::json instance_to_json(const ProblemInstance& inst);
// Missing "replicas" are recomputed from the failure model.
ProblemInstance instance_from_json(const nlohmann::json& doc);

nlohmann::json solution_to_json(const IntegralSolution& sol);
IntegralSolution solution_from_json(const nlohmann::json& doc);

// Parses text as JSON, converting syntax errors into ParseError with line
// and column. `source` names the input in messages.
nlohmann::json parse_json(std::string_view text, std::string_view source);

std::string read_text_file(const std::filesystem::path& path);
// Writes atomically enough for our purposes: truncate then write. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Canonical text form: two-space indent and a trailing newline.
std::string dump_json(const nlohmann::json& doc);

ProblemInstance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const ProblemInstance& inst);

IntegralSolution read_solution(const std::filesystem::path& path);
void write_solution(const std::filesystem::path& path, const IntegralSolution& sol);

// Checks the optional "version" key; throws ParseError on mismatch.
void check_version(const nlohmann::json& doc, std::string_view what);

}  // namespace mecplace

#endif  // MECPLACE_SERIALIZE_HPP
