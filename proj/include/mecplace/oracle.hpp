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

#ifndef MECPLACE_ORACLE_HPP
#define MECPLACE_ORACLE_HPP

#include <cstddef>

#include "mecplace/errors.hpp"
#include "mecplace/lp.hpp"
#include "mecplace/model.hpp"

namespace mecplace {

enum class OracleMode {
  // Depth-first search over requests with a residual LP bound at each node.
  kBranchAndBound,
  // Every per-request choice of {drop} or an exactly-replicas MEC subset,
  // pruned only by capacity.
  kExhaustive,
  // Like kExhaustive but with every subset of at least the required size.
  // Exponentially larger; used to confirm the exact-size reduction.
  kExhaustiveAnySize,
};

struct OracleLimits {
  std::size_t max_nodes = 1'000'000;
  SimplexOptions simplex{};
};

struct ExactResult {
  IntegralSolution solution;
  double objective = 0;
  std::size_t nodes = 0;
};

// Thrown when the node limit is reached. Carries the best solution found so
// far and the root LP bound, so the optimality gap is bound - incumbent.
class OracleLimitError : public Error {
 public:
  OracleLimitError(const std::string& what, ExactResult incumbent, double bound)
      : Error(what), incumbent_(std::move(incumbent)), bound_(bound) {}

  const ExactResult& incumbent() const noexcept { return incumbent_; }
  double bound() const noexcept { return bound_; }
  double gap() const noexcept { return bound_ - incumbent_.objective; }

 private:
  ExactResult incumbent_;
  double bound_;
};

// Optimal integral solution of the placement problem. Extra copies beyond
// the required count only consume capacity, so some optimum uses exactly the
// required count; the first two modes search that space.
ExactResult solve_exact(const ProblemInstance& inst, const OracleLimits& limits = {},
                        OracleMode mode = OracleMode::kBranchAndBound);

// Copy of `inst` with every replica count forced to one. Failure thresholds
// are kept so results can be judged against the true requirements.
ProblemInstance strip_availability(const ProblemInstance& inst);

// Drops (y and x cleared) every served request whose copy count falls short
// of the replica count in `inst`. This is how a solution computed without
// availability is scored.
IntegralSolution apply_true_redundancy(const ProblemInstance& inst, const IntegralSolution& sol);

}  // namespace mecplace

#endif  // MECPLACE_ORACLE_HPP
