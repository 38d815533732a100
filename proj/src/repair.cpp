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

#include "mecplace/repair.hpp"

#include <algorithm>

#include "mecplace/errors.hpp"

namespace mecplace {

namespace {

bool over_capacity(const ResourceVector& load, const MecNode& mec) {
  for (Resource k : kAllResources) {
    const double cap = mec.capacity(k);
    if (load[index_of(k)] > cap + kCapacityTolerance * std::max(1.0, cap)) return true;
  }
  return false;
}

class Repairer {
 public:
  Repairer(const ProblemInstance& inst, IntegralSolution sol, const RepairOptions& opt)
      : inst_(inst), sol_(std::move(sol)), opt_(opt), loads_(inst.mec_count(), ResourceVector{}) {}

  IntegralSolution run() {
    prune_unserved_and_unredundant();
    recompute_loads();
    // One ascending sweep suffices: dropping a request only lowers loads, so
    // MECs already visited stay within capacity. The outer loop re-verifies.
    while (any_overloaded()) {
      for (std::size_t m = 0; m < inst_.mec_count(); ++m) {
        while (over_capacity(loads_[m], inst_.mecs[m])) {
          if (opt_.trim_excess_replicas && trim_one(m)) continue;
          drop(lowest_reward_on(m));
        }
      }
    }
    return std::move(sol_);
  }

 private:
  void prune_unserved_and_unredundant() {
    for (std::size_t r = 0; r < inst_.request_count(); ++r) {
      for (auto& v : sol_.x.row(r)) v = v ? 1 : 0;
      sol_.y[r] = sol_.y[r] ? 1 : 0;
      if (sol_.y[r] != 0 && sol_.placements(r) >= inst_.replicas[r]) continue;
      sol_.y[r] = 0;
      for (auto& v : sol_.x.row(r)) v = 0;
    }
  }

  void recompute_loads() {
    std::fill(loads_.begin(), loads_.end(), ResourceVector{});
    for (std::size_t r = 0; r < inst_.request_count(); ++r) {
      const auto d = inst_.requests[r].demands();
      for (std::size_t m = 0; m < inst_.mec_count(); ++m) {
        if (!sol_.x(r, m)) continue;
        for (std::size_t i = 0; i < kResourceCount; ++i) loads_[m][i] += d[i];
      }
    }
  }

  bool any_overloaded() const {
    for (std::size_t m = 0; m < inst_.mec_count(); ++m) {
      if (over_capacity(loads_[m], inst_.mecs[m])) return true;
    }
    return false;
  }

  std::size_t lowest_reward_on(std::size_t m) const {
    std::size_t best = inst_.request_count();
    for (std::size_t r = 0; r < inst_.request_count(); ++r) {
      if (!sol_.x(r, m)) continue;
      if (best == inst_.request_count()) {
        best = r;
        continue;
      }
      const auto& a = inst_.requests[r];
      const auto& b = inst_.requests[best];
      if (a.reward < b.reward || (a.reward == b.reward && a.id > b.id)) best = r;
    }
    // An overloaded MEC with nothing on it would mean negative demands.
    if (best == inst_.request_count()) throw InvalidModelError("overloaded MEC hosts no request");
    return best;
  }

  void release(std::size_t r, std::size_t m) {
    sol_.x(r, m) = 0;
    const auto d = inst_.requests[r].demands();
    for (std::size_t i = 0; i < kResourceCount; ++i) loads_[m][i] -= d[i];
  }

  void drop(std::size_t r) {
    for (std::size_t m = 0; m < inst_.mec_count(); ++m) {
      if (sol_.x(r, m)) release(r, m);
    }
    sol_.y[r] = 0;
  }

  // Releases one surplus copy on MEC m, lowest reward first.
  bool trim_one(std::size_t m) {
    std::size_t pick = inst_.request_count();
    for (std::size_t r = 0; r < inst_.request_count(); ++r) {
      if (!sol_.x(r, m) || sol_.placements(r) <= inst_.replicas[r]) continue;
      if (pick == inst_.request_count() ||
          inst_.requests[r].reward < inst_.requests[pick].reward ||
          (inst_.requests[r].reward == inst_.requests[pick].reward &&
           inst_.requests[r].id > inst_.requests[pick].id)) {
        pick = r;
      }
    }
    if (pick == inst_.request_count()) return false;
    release(pick, m);
    return true;
  }

  const ProblemInstance& inst_;
  IntegralSolution sol_;
  RepairOptions opt_;
  std::vector<ResourceVector> loads_;
};

}  // namespace

IntegralSolution greedy_repair(const ProblemInstance& inst, const IntegralSolution& sol,
                               const RepairOptions& options) {
  const SolutionMetrics before = evaluate_solution(inst, sol);
  if (before.feasible) return sol;
  return Repairer(inst, sol, options).run();
}

}  // namespace mecplace
