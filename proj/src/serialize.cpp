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

#include "mecplace/serialize.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mecplace/errors.hpp"

namespace mecplace {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& obj, const char* key, std::string_view ctx) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(fmt::format("{}: missing key '{}'", ctx, key));
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: bad value for '{}': {}", ctx, key, e.what()));
  }
}

}  // namespace

void check_version(const json& doc, std::string_view what) {
  if (!doc.is_object()) throw ParseError(fmt::format("{}: expected a JSON object", what));
  if (doc.contains("version")) {
    const auto& v = doc.at("version");
    if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
      throw ParseError(fmt::format("{}: unsupported version {}", what, v.dump()));
    }
  }
}

json instance_to_json(const ProblemInstance& inst) {
  json doc;
  doc["version"] = kFormatVersion;
  doc["failure_model"] = {{"vnf_failure", inst.failure_model.vnf_failure},
                          {"pm_failure", inst.failure_model.pm_failure}};
  json mecs = json::array();
  for (const auto& m : inst.mecs) {
    mecs.push_back({{"id", m.id},
                    {"cpu", m.cpu_capacity},
                    {"ram", m.ram_capacity},
                    {"uplink", m.uplink_capacity},
                    {"downlink", m.downlink_capacity}});
  }
  doc["mecs"] = std::move(mecs);
  json reqs = json::array();
  for (const auto& r : inst.requests) {
    json chain = json::array();
    for (UpfKind k : r.upf_chain) chain.push_back(std::string(to_string(k)));
    reqs.push_back({{"id", r.id},
                    {"cpu", r.cpu_demand},
                    {"ram", r.ram_demand},
                    {"uplink", r.uplink_demand},
                    {"downlink", r.downlink_demand},
                    {"failure_threshold", r.failure_threshold},
                    {"reward", r.reward},
                    {"upf_chain", std::move(chain)}});
  }
  doc["requests"] = std::move(reqs);
  doc["replicas"] = inst.replicas;
  return doc;
}

ProblemInstance instance_from_json(const json& doc) {
  check_version(doc, "instance");
  ProblemInstance inst;
  const auto fm = required<json>(doc, "failure_model", "instance");
  inst.failure_model.vnf_failure = required<double>(fm, "vnf_failure", "failure_model");
  inst.failure_model.pm_failure = required<double>(fm, "pm_failure", "failure_model");

  for (const auto& m : required<json>(doc, "mecs", "instance")) {
    inst.mecs.push_back({required<int>(m, "id", "mec"), required<double>(m, "cpu", "mec"),
                         required<double>(m, "ram", "mec"), required<double>(m, "uplink", "mec"),
                         required<double>(m, "downlink", "mec")});
  }
  for (const auto& r : required<json>(doc, "requests", "instance")) {
    ServiceRequest q;
    q.id = required<int>(r, "id", "request");
    q.cpu_demand = required<double>(r, "cpu", "request");
    q.ram_demand = required<double>(r, "ram", "request");
    q.uplink_demand = required<double>(r, "uplink", "request");
    q.downlink_demand = required<double>(r, "downlink", "request");
    q.failure_threshold = required<double>(r, "failure_threshold", "request");
    q.reward = required<double>(r, "reward", "request");
    if (r.contains("upf_chain")) {
      for (const auto& name : r.at("upf_chain")) {
        try {
          q.upf_chain.push_back(upf_kind_from_string(name.get<std::string>()));
        } catch (const std::exception& e) {
          throw ParseError(fmt::format("request {}: {}", q.id, e.what()));
        }
      }
    }
    inst.requests.push_back(std::move(q));
  }
  try {
    if (doc.contains("replicas")) {
      inst.replicas = doc.at("replicas").get<std::vector<int>>();
    } else {
      for (const auto& q : inst.requests) {
        inst.replicas.push_back(required_replicas(inst.failure_model, q.failure_threshold));
      }
    }
    validate(inst);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(fmt::format("instance: {}", e.what()));
  }
  return inst;
}

json solution_to_json(const IntegralSolution& sol) {
  json doc;
  doc["version"] = kFormatVersion;
  json x = json::array();
  for (std::size_t r = 0; r < sol.x.rows(); ++r) {
    json row = json::array();
    for (std::uint8_t v : sol.x.row(r)) row.push_back(static_cast<int>(v));
    x.push_back(std::move(row));
  }
  doc["x"] = std::move(x);
  json y = json::array();
  for (std::uint8_t v : sol.y) y.push_back(static_cast<int>(v));
  doc["y"] = std::move(y);
  return doc;
}

IntegralSolution solution_from_json(const json& doc) {
  check_version(doc, "solution");
  const auto x = required<std::vector<std::vector<int>>>(doc, "x", "solution");
  const auto y = required<std::vector<int>>(doc, "y", "solution");
  if (x.size() != y.size()) throw ParseError("solution: x and y disagree on request count");
  const std::size_t cols = x.empty() ? 0 : x.front().size();
  IntegralSolution sol = IntegralSolution::zeros(x.size(), cols);
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r].size() != cols) throw ParseError("solution: ragged x matrix");
    for (std::size_t m = 0; m < cols; ++m) {
      if (x[r][m] != 0 && x[r][m] != 1) throw ParseError("solution: x entries must be 0 or 1");
      sol.x(r, m) = static_cast<std::uint8_t>(x[r][m]);
    }
    if (y[r] != 0 && y[r] != 1) throw ParseError("solution: y entries must be 0 or 1");
    sol.y[r] = static_cast<std::uint8_t>(y[r]);
  }
  return sol;
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset just past the offending character.
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(fmt::format("{}:{}:{}: {}", source, line, column, e.what()), line, column);
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path), path.string());
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

ProblemInstance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

void write_instance(const std::filesystem::path& path, const ProblemInstance& inst) {
  write_text_file(path, dump_json(instance_to_json(inst)));
}

IntegralSolution read_solution(const std::filesystem::path& path) {
  return solution_from_json(read_json_file(path));
}

void write_solution(const std::filesystem::path& path, const IntegralSolution& sol) {
  write_text_file(path, dump_json(solution_to_json(sol)));
}

}  // namespace mecplace
