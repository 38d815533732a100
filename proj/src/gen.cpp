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

#include "mecplace/gen.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "mecplace/errors.hpp"
#include "mecplace/random.hpp"
#include "mecplace/serialize.hpp"

namespace mecplace {

namespace {

constexpr std::uint64_t kMecStream = 1;
constexpr std::uint64_t kRequestStream = 2;

std::size_t pick_weighted(Rng& rng, const std::vector<double>& weights, std::size_t n) {
  if (weights.empty()) return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return n - 1;
}

}  // namespace

UpfCatalog UpfCatalog::standard() {
  UpfCatalog c;
  c.entries = {{UpfKind::kIdps, {2, 2}}, {UpfKind::kFw, {2, 3}},  {UpfKind::kNat, {1, 1}},
               {UpfKind::kTm, {1, 3}},   {UpfKind::kVoc, {2, 2}}, {UpfKind::kWoc, {1, 2}}};
  c.mandatory = {UpfKind::kNat, UpfKind::kFw};
  c.optional = {UpfKind::kIdps, UpfKind::kTm, UpfKind::kVoc, UpfKind::kWoc};
  c.optional_picks = 2;
  return c;
}

UpfCatalog::Entry UpfCatalog::totals(const std::vector<UpfKind>& chain) const {
  Entry sum{0, 0};
  for (UpfKind k : chain) {
    const auto it = entries.find(k);
    if (it == entries.end()) {
      throw InvalidModelError(fmt::format("UPF {} missing from catalog", to_string(k)));
    }
    sum.cpu += it->second.cpu;
    sum.ram += it->second.ram;
  }
  return sum;
}

void GeneratorConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidModelError("generator config: " + msg); };
  if (mec_count <= 0) fail("mec_count must be positive");
  if (request_count < 0) fail("request_count must be nonnegative");
  if (cpu_range.lo > cpu_range.hi || cpu_range.lo <= 0) fail("bad cpu_range");
  if (ram_range.lo > ram_range.hi || ram_range.lo <= 0) fail("bad ram_range");
  if (!(uplink_capacity > 0) || !(downlink_capacity > 0)) fail("link capacities must be positive");
  if (availability_levels.empty()) fail("availability_levels is empty");
  for (double a : availability_levels) {
    if (!(a > 0 && a < 1)) fail("availability levels must lie in (0,1)");
  }
  if (!availability_weights.empty()) {
    if (availability_weights.size() != availability_levels.size()) {
      fail("availability_weights must match availability_levels");
    }
    double total = 0;
    for (double w : availability_weights) {
      if (!(w >= 0)) fail("availability weights must be nonnegative");
      total += w;
    }
    if (!(total > 0)) fail("availability weights sum to zero");
  }
  for (const RealRange* r : {&reward_base_range, &uplink_demand_range, &downlink_demand_range}) {
    if (!(r->lo <= r->hi)) fail("empty real range");
  }
  if (!(reward_base_range.lo >= 0)) fail("reward base must be nonnegative");
  if (!(uplink_demand_range.lo > 0) || !(downlink_demand_range.lo > 0)) {
    fail("link demands must be positive");
  }
  service_failure_prob(failure_model);
}

ProblemInstance generate(const GeneratorConfig& cfg, const UpfCatalog& catalog) {
  cfg.validate();
  const auto n_opt = static_cast<std::int64_t>(catalog.optional.size());
  if (catalog.optional_picks < 0 || catalog.optional_picks > n_opt) {
    throw InvalidModelError("catalog asks for more optional UPFs than it has");
  }

  std::vector<MecNode> mecs;
  mecs.reserve(static_cast<std::size_t>(cfg.mec_count));
  for (int m = 0; m < cfg.mec_count; ++m) {
    Rng rng(derive_seed(cfg.seed, {kMecStream, static_cast<std::uint64_t>(m)}));
    MecNode node;
    node.id = m;
    node.cpu_capacity = static_cast<double>(rng.uniform_int(cfg.cpu_range.lo, cfg.cpu_range.hi));
    node.ram_capacity = static_cast<double>(rng.uniform_int(cfg.ram_range.lo, cfg.ram_range.hi));
    node.uplink_capacity = cfg.uplink_capacity;
    node.downlink_capacity = cfg.downlink_capacity;
    mecs.push_back(node);
  }

  std::vector<ServiceRequest> requests;
  requests.reserve(static_cast<std::size_t>(cfg.request_count));
  for (int k = 0; k < cfg.request_count; ++k) {
    Rng rng(derive_seed(cfg.seed, {kRequestStream, static_cast<std::uint64_t>(k)}));
    ServiceRequest q;
    q.id = k;
    q.upf_chain = catalog.mandatory;
    // Partial Fisher-Yates: uniform sample without replacement.
    std::vector<UpfKind> pool = catalog.optional;
    for (int i = 0; i < catalog.optional_picks; ++i) {
      const auto j = rng.uniform_int(i, n_opt - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      q.upf_chain.push_back(pool[static_cast<std::size_t>(i)]);
    }
    const auto totals = catalog.totals(q.upf_chain);
    q.cpu_demand = totals.cpu;
    q.ram_demand = totals.ram;

    const std::size_t level =
        pick_weighted(rng, cfg.availability_weights, cfg.availability_levels.size());
    q.failure_threshold = 1.0 - cfg.availability_levels[level];
    q.reward = rng.uniform(cfg.reward_base_range.lo, cfg.reward_base_range.hi) *
               cfg.availability_levels[level];
    q.uplink_demand = rng.uniform(cfg.uplink_demand_range.lo, cfg.uplink_demand_range.hi);
    q.downlink_demand = rng.uniform(cfg.downlink_demand_range.lo, cfg.downlink_demand_range.hi);
    requests.push_back(std::move(q));
  }
  return make_instance(std::move(mecs), std::move(requests), cfg.failure_model);
}

namespace {

using nlohmann::json;

void check_keys(const json& doc, std::initializer_list<const char*> allowed) {
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ParseError(fmt::format("generator config: unknown key '{}'", key));
  }
}

template <typename T>
void read_into(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("generator config: bad value for '{}': {}", key, e.what()));
  }
}

template <typename Range, typename V>
void read_range(const json& doc, const char* key, Range& out) {
  if (!doc.contains(key)) return;
  std::vector<V> v;
  read_into(doc, key, v);
  if (v.size() != 2) throw ParseError(fmt::format("generator config: '{}' needs two values", key));
  out = {v[0], v[1]};
}

}  // namespace

GeneratorConfig generator_config_from_json(const json& doc, GeneratorConfig cfg) {
  check_version(doc, "generator config");
  check_keys(doc, {"version", "mec_count", "cpu_range", "ram_range", "uplink_capacity",
                   "downlink_capacity", "request_count", "availability_levels",
                   "availability_weights", "reward_base_range", "uplink_demand_range",
                   "downlink_demand_range", "failure_model", "seed"});
  read_into(doc, "mec_count", cfg.mec_count);
  read_range<IntRange, std::int64_t>(doc, "cpu_range", cfg.cpu_range);
  read_range<IntRange, std::int64_t>(doc, "ram_range", cfg.ram_range);
  read_into(doc, "uplink_capacity", cfg.uplink_capacity);
  read_into(doc, "downlink_capacity", cfg.downlink_capacity);
  read_into(doc, "request_count", cfg.request_count);
  read_into(doc, "availability_levels", cfg.availability_levels);
  read_into(doc, "availability_weights", cfg.availability_weights);
  read_range<RealRange, double>(doc, "reward_base_range", cfg.reward_base_range);
  read_range<RealRange, double>(doc, "uplink_demand_range", cfg.uplink_demand_range);
  read_range<RealRange, double>(doc, "downlink_demand_range", cfg.downlink_demand_range);
  if (doc.contains("failure_model")) {
    const auto& fm = doc.at("failure_model");
    read_into(fm, "vnf_failure", cfg.failure_model.vnf_failure);
    read_into(fm, "pm_failure", cfg.failure_model.pm_failure);
  }
  read_into(doc, "seed", cfg.seed);
  try {
    cfg.validate();
  } catch (const InvalidModelError& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

json generator_config_to_json(const GeneratorConfig& cfg) {
  return {{"version", kFormatVersion},
          {"mec_count", cfg.mec_count},
          {"cpu_range", {cfg.cpu_range.lo, cfg.cpu_range.hi}},
          {"ram_range", {cfg.ram_range.lo, cfg.ram_range.hi}},
          {"uplink_capacity", cfg.uplink_capacity},
          {"downlink_capacity", cfg.downlink_capacity},
          {"request_count", cfg.request_count},
          {"availability_levels", cfg.availability_levels},
          {"availability_weights", cfg.availability_weights},
          {"reward_base_range", {cfg.reward_base_range.lo, cfg.reward_base_range.hi}},
          {"uplink_demand_range", {cfg.uplink_demand_range.lo, cfg.uplink_demand_range.hi}},
          {"downlink_demand_range", {cfg.downlink_demand_range.lo, cfg.downlink_demand_range.hi}},
          {"failure_model",
           {{"vnf_failure", cfg.failure_model.vnf_failure},
            {"pm_failure", cfg.failure_model.pm_failure}}},
          {"seed", cfg.seed}};
}

}  // namespace mecplace
