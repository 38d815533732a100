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

#ifndef MECPLACE_REPAIR_HPP
#define MECPLACE_REPAIR_HPP

#include "mecplace/model.hpp"

namespace mecplace {

struct RepairOptions {
  // Before dropping whole requests, release surplus copies (beyond the
  // required count) hosted on an overloaded MEC. Off by default.
  bool trim_excess_replicas = false;
};

// Greedy feasibility repair of a rounded solution.
//
// A feasible input is returned unchanged. Otherwise placements that serve no
// request are released first, then MECs are visited in ascending order and,
// while a MEC is over any capacity, the lowest-reward request it hosts
// (larger id on ties) is dropped everywhere. Served requests that lack their
// required copies are dropped as well. The result is always feasible, never
// earns more, and serves a subset of the input's requests.
IntegralSolution greedy_repair(const ProblemInstance& inst, const IntegralSolution& sol,
                               const RepairOptions& options = {});

}  // namespace mecplace

#endif  // MECPLACE_REPAIR_HPP
