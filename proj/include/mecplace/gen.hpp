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

#ifndef MECPLACE_GEN_HPP
#define MECPLACE_GEN_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mecplace/model.hpp"

namespace mecplace {

struct IntRange {
  std::int64_t lo;
  std::int64_t hi;
};

struct RealRange {
  double lo;
  double hi;
};

// CPU/RAM needs of each UPF kind and the split into always-required (T1) and
// optional (T2) functions. Defaults are the published UPF table.
struct UpfCatalog {
  struct Entry {
    double cpu;  // cores
    double ram;  // GB
  };
  std::map<UpfKind, Entry> entries;
  std::vector<UpfKind> mandatory;  // T1
  std::vector<UpfKind> optional;   // T2
  int optional_picks = 2;

  static UpfCatalog standard();

  // Sum of the catalog entries of a chain.
  Entry totals(const std::vector<UpfKind>& chain) const;
};

struct GeneratorConfig {
  int mec_count = 10;
  IntRange cpu_range{32, 56};  // cores, integer draws
  IntRange ram_range{32, 80};  // GB, integer draws
  double uplink_capacity = 75;
  double downlink_capacity = 250;
  int request_count = 50;
  // Target availability levels 1 - eps_r, drawn with `availability_weights`
  // (uniform when empty).
  std::vector<double> availability_levels{0.99, 0.999, 0.9999};
  std::vector<double> availability_weights;
  RealRange reward_base_range{6, 8};
  RealRange uplink_demand_range{6, 15};
  RealRange downlink_demand_range{20, 40};
  FailureModel failure_model{};
  std::uint64_t seed = 1;

  void validate() const;
};

// Draws an instance. MEC m and request k each read their own sub-stream of
// `cfg.seed`, so request k is the same whatever `request_count` is.
ProblemInstance generate(const GeneratorConfig& cfg, const UpfCatalog& catalog = UpfCatalog::standard());

// Config documents accept any subset of the GeneratorConfig fields; missing
// keys keep their defaults. Ranges are two-element arrays.
GeneratorConfig generator_config_from_json(const nlohmann::json& doc,
                                           GeneratorConfig base = {});
nlohmann::json generator_config_to_json(const GeneratorConfig& cfg);

}  // namespace mecplace

#endif  // MECPLACE_GEN_HPP
