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

#ifndef MECPLACE_ROUNDING_HPP
#define MECPLACE_ROUNDING_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mecplace/model.hpp"

namespace mecplace {

// Probabilities within this distance outside [0,1] are clamped; anything
// further is a DomainError.
inline constexpr double kRoundingClamp = 1e-7;

// One pass of independent randomized rounding. Each x[r][m] is set with
// probability x~[r][m]; y[r] is then drawn with probability y~[r] only when
// request r received at least its required number of copies, otherwise it is
// zero. Redundancy and admission constraints always hold on the output;
// capacities may not.
//
// Draw order is fixed: for each request, one draw per MEC in index order, then
// one draw for y when the redundancy gate passes.
IntegralSolution randomized_round(const FractionalSolution& frac, const ProblemInstance& inst,
                                  std::uint64_t seed);

// Independent roundings with seeds seed0, seed0+1, ..., each evaluated.
std::vector<std::pair<IntegralSolution, SolutionMetrics>> rounding_ensemble(
    const FractionalSolution& frac, const ProblemInstance& inst, std::size_t n_seeds,
    std::uint64_t seed0);

// Exact probability that request r passes the redundancy gate, i.e. that at
// least replicas[r] of its independent Bernoulli(x~[r][m]) draws succeed
// (Poisson-binomial tail by dynamic programming).
double gate_pass_probability(const FractionalSolution& frac, const ProblemInstance& inst,
                             std::size_t request);

// Expected reward of randomized_round: sum of reward * y~ * gate probability.
double expected_rounded_reward(const FractionalSolution& frac, const ProblemInstance& inst);

}  // namespace mecplace

#endif  // MECPLACE_ROUNDING_HPP
