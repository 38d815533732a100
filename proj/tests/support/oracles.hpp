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

// Reference implementations used only by the tests. They share no code with
// the solvers they check beyond the data types.

#ifndef MECPLACE_TESTS_ORACLES_HPP
#define MECPLACE_TESTS_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mecplace/lp.hpp"
#include "mecplace/model.hpp"

namespace mecplace::testing {

MecNode mec(int id, double cpu, double ram, double up, double down);
ServiceRequest request(int id, double cpu, double ram, double up, double down, double reward,
                       double failure_threshold = 0.01);

// Instance with replica counts set by hand instead of from the failure model.
ProblemInstance instance_with_replicas(std::vector<MecNode> mecs,
                                       std::vector<ServiceRequest> requests,
                                       std::vector<int> replicas);

// Small instances with binding capacities: 1..max_mecs MECs, 1..max_requests
// requests, replica counts 1 or 2.
ProblemInstance random_small_instance(std::uint64_t seed, int max_requests, int max_mecs);

// Bounded random program with 1..max_vars variables and a few rows of every
// sense. Some draws are infeasible.
LinearProgram random_program(std::uint64_t seed, int max_vars);

// Maximum of a bounded program by enumerating every basic solution (all
// choices of n tight constraints). nullopt when no vertex is feasible.
std::optional<double> vertex_enumeration_max(const LinearProgram& lp);

// Best reward over every assignment of each request to "dropped" or any MEC
// subset of at least its replica count. Exponential; keep R * M small.
double brute_force_optimum(const ProblemInstance& inst);

// Direct capacity/redundancy check, independent of evaluate_solution.
bool is_feasible(const ProblemInstance& inst, const IntegralSolution& sol);

double reward_of(const ProblemInstance& inst, const IntegralSolution& sol);

// Probability that at least replicas[r] of request r's independent
// Bernoulli(x~[r][m]) draws succeed, by summing over all 2^M outcomes.
double gate_probability_by_enumeration(const FractionalSolution& frac, const ProblemInstance& inst,
                                       std::size_t r);

// Sum of reward * y~ * gate probability, from the enumeration above.
double gated_expectation(const FractionalSolution& frac, const ProblemInstance& inst);

}  // namespace mecplace::testing

#endif  // MECPLACE_TESTS_ORACLES_HPP
