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

#include "mecplace/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "mecplace/errors.hpp"

namespace mecplace {

std::string_view to_string(Resource r) {
  switch (r) {
    case Resource::kCpu: return "cpu";
    case Resource::kRam: return "ram";
    case Resource::kUplink: return "uplink";
    case Resource::kDownlink: return "downlink";
  }
  return "?";
}

std::string_view to_string(UpfKind k) {
  switch (k) {
    case UpfKind::kIdps: return "IDPS";
    case UpfKind::kFw: return "FW";
    case UpfKind::kNat: return "NAT";
    case UpfKind::kTm: return "TM";
    case UpfKind::kVoc: return "VOC";
    case UpfKind::kWoc: return "WOC";
  }
  return "?";
}

UpfKind upf_kind_from_string(std::string_view name) {
  for (UpfKind k : {UpfKind::kIdps, UpfKind::kFw, UpfKind::kNat, UpfKind::kTm,
                    UpfKind::kVoc, UpfKind::kWoc}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError(fmt::format("unknown UPF kind '{}'", name));
}

std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::kRedundancy: return "redundancy";
    case ConstraintKind::kAdmission: return "admission";
    case ConstraintKind::kCpu: return "cpu";
    case ConstraintKind::kRam: return "ram";
    case ConstraintKind::kUplink: return "uplink";
    case ConstraintKind::kDownlink: return "downlink";
    case ConstraintKind::kBinary: return "binary";
  }
  return "?";
}

ConstraintKind constraint_for(Resource r) noexcept {
  switch (r) {
    case Resource::kCpu: return ConstraintKind::kCpu;
    case Resource::kRam: return ConstraintKind::kRam;
    case Resource::kUplink: return ConstraintKind::kUplink;
    case Resource::kDownlink: return ConstraintKind::kDownlink;
  }
  return ConstraintKind::kCpu;
}

double MecNode::capacity(Resource r) const noexcept { return capacities()[index_of(r)]; }

ResourceVector MecNode::capacities() const noexcept {
  return {cpu_capacity, ram_capacity, uplink_capacity, downlink_capacity};
}

double ServiceRequest::demand(Resource r) const noexcept { return demands()[index_of(r)]; }

ResourceVector ServiceRequest::demands() const noexcept {
  return {cpu_demand, ram_demand, uplink_demand, downlink_demand};
}

double service_failure_prob(const FailureModel& fm) {
  const double eps = fm.vnf_failure + fm.pm_failure;
  if (!(fm.vnf_failure >= 0 && fm.pm_failure >= 0) || !(eps > 0 && eps < 1)) {
    throw InvalidModelError(fmt::format(
        "failure model needs 0 < vnf + pm < 1 (got vnf={}, pm={})", fm.vnf_failure,
        fm.pm_failure));
  }
  return eps;
}

int required_replicas(double replica_failure, double failure_threshold) {
  if (!(failure_threshold > 0 && failure_threshold < 1)) {
    throw DomainError(
        fmt::format("failure threshold must lie in (0,1), got {}", failure_threshold));
  }
  if (!(replica_failure > 0 && replica_failure < 1)) {
    throw InvalidModelError(
        fmt::format("per-replica failure must lie in (0,1), got {}", replica_failure));
  }
  const double ratio = std::log(failure_threshold) / std::log(replica_failure);
  int k = std::max(1, static_cast<int>(std::ceil(ratio)));
  // ceil() of a ratio of logs can land one off when the threshold is an exact
  // power of the per-replica failure; settle it against the defining
  // inequality replica_failure^k <= failure_threshold.
  constexpr double kRel = 1e-12;
  while (k > 1 && std::pow(replica_failure, k - 1) <= failure_threshold * (1 + kRel)) --k;
  while (std::pow(replica_failure, k) > failure_threshold * (1 + kRel)) ++k;
  return k;
}

int required_replicas(const FailureModel& fm, double failure_threshold) {
  return required_replicas(service_failure_prob(fm), failure_threshold);
}

ProblemInstance make_instance(std::vector<MecNode> mecs, std::vector<ServiceRequest> requests,
                              FailureModel fm) {
  ProblemInstance inst{std::move(mecs), std::move(requests), fm, {}};
  inst.replicas.reserve(inst.requests.size());
  for (const auto& r : inst.requests) {
    inst.replicas.push_back(required_replicas(fm, r.failure_threshold));
  }
  validate(inst);
  return inst;
}

void validate(const ProblemInstance& inst) {
  service_failure_prob(inst.failure_model);
  std::vector<int> ids;
  for (const auto& m : inst.mecs) {
    for (Resource r : kAllResources) {
      if (!(m.capacity(r) > 0) || !std::isfinite(m.capacity(r))) {
        throw InvalidModelError(fmt::format("MEC {} has non-positive {} capacity", m.id,
                                            to_string(r)));
      }
    }
    ids.push_back(m.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw InvalidModelError("duplicate MEC id");
  }
  ids.clear();
  for (const auto& q : inst.requests) {
    for (Resource r : kAllResources) {
      if (!(q.demand(r) > 0) || !std::isfinite(q.demand(r))) {
        throw InvalidModelError(fmt::format("request {} has non-positive {} demand", q.id,
                                            to_string(r)));
      }
    }
    if (!(q.failure_threshold > 0 && q.failure_threshold < 1)) {
      throw InvalidModelError(fmt::format("request {} failure threshold outside (0,1)", q.id));
    }
    if (!(q.reward >= 0) || !std::isfinite(q.reward)) {
      throw InvalidModelError(fmt::format("request {} has negative reward", q.id));
    }
    ids.push_back(q.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw InvalidModelError("duplicate request id");
  }
  if (inst.replicas.size() != inst.requests.size()) {
    throw DimensionMismatchError(fmt::format("{} replica counts for {} requests",
                                             inst.replicas.size(), inst.requests.size()));
  }
  for (int psi : inst.replicas) {
    if (psi < 1) throw InvalidModelError("replica count below one");
  }
}

int IntegralSolution::placements(std::size_t request) const {
  int n = 0;
  for (std::uint8_t v : x.row(request)) n += v;
  return n;
}

namespace {

bool exceeds(double load, double cap) {
  return load > cap + kCapacityTolerance * std::max(1.0, cap);
}

}  // namespace

SolutionMetrics evaluate_solution(const ProblemInstance& inst, const IntegralSolution& sol) {
  const std::size_t R = inst.request_count();
  const std::size_t M = inst.mec_count();
  if (sol.x.rows() != R || sol.x.cols() != M || sol.y.size() != R ||
      inst.replicas.size() != R) {
    throw DimensionMismatchError(fmt::format(
        "solution is {}x{} with {} admissions, instance has {} requests and {} MECs",
        sol.x.rows(), sol.x.cols(), sol.y.size(), R, M));
  }

  SolutionMetrics out;
  out.loads.assign(M, ResourceVector{});
  out.utilization.assign(M, ResourceVector{});

  for (std::size_t r = 0; r < R; ++r) {
    const auto& req = inst.requests[r];
    const int placed = sol.placements(r);
    for (std::size_t m = 0; m < M; ++m) {
      const std::uint8_t v = sol.x(r, m);
      if (v > 1) {
        out.violations.push_back({ConstraintKind::kBinary, req.id, static_cast<double>(v - 1)});
      }
      if (v == 0) continue;
      for (Resource k : kAllResources) out.loads[m][index_of(k)] += v * req.demand(k);
    }
    const std::uint8_t y = sol.y[r];
    if (y > 1) {
      out.violations.push_back({ConstraintKind::kAdmission, req.id, static_cast<double>(y - 1)});
    }
    if (y >= 1) {
      out.total_reward += req.reward * y;
      ++out.served_count;
      if (placed < inst.replicas[r] * y) {
        out.violations.push_back({ConstraintKind::kRedundancy, req.id,
                                  static_cast<double>(inst.replicas[r] * y - placed)});
      }
    } else if (placed > 0) {
      out.wasted_placements.push_back(req.id);
    }
  }

  ResourceVector load_sum{}, cap_sum{};
  for (std::size_t m = 0; m < M; ++m) {
    const auto& mec = inst.mecs[m];
    for (Resource k : kAllResources) {
      const std::size_t i = index_of(k);
      const double cap = mec.capacity(k);
      out.utilization[m][i] = out.loads[m][i] / cap;
      load_sum[i] += out.loads[m][i];
      cap_sum[i] += cap;
      if (exceeds(out.loads[m][i], cap)) {
        out.violations.push_back({constraint_for(k), mec.id, out.loads[m][i] - cap});
      }
    }
  }
  for (std::size_t i = 0; i < kResourceCount; ++i) {
    out.aggregate_utilization[i] = cap_sum[i] > 0 ? load_sum[i] / cap_sum[i] : 0.0;
  }
  out.feasible = out.violations.empty();
  return out;
}

std::vector<ResourceVector> fractional_loads(const ProblemInstance& inst,
                                             const FractionalSolution& frac) {
  const std::size_t R = inst.request_count();
  const std::size_t M = inst.mec_count();
  if (frac.x.rows() != R || frac.x.cols() != M) {
    throw DimensionMismatchError("fractional solution does not match instance");
  }
  std::vector<ResourceVector> loads(M, ResourceVector{});
  for (std::size_t r = 0; r < R; ++r) {
    const auto d = inst.requests[r].demands();
    for (std::size_t m = 0; m < M; ++m) {
      const double v = frac.x(r, m);
      if (v == 0) continue;
      for (std::size_t i = 0; i < kResourceCount; ++i) loads[m][i] += v * d[i];
    }
  }
  return loads;
}

}  // namespace mecplace
