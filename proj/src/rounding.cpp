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

#include "mecplace/rounding.hpp"

#include <algorithm>
#include <cassert>

#include <fmt/format.h>

#include "mecplace/errors.hpp"
#include "mecplace/random.hpp"

namespace mecplace {

namespace {

double checked_probability(double p, const char* what, std::size_t r, std::size_t m) {
  if (!(p >= -kRoundingClamp && p <= 1.0 + kRoundingClamp)) {
    throw DomainError(fmt::format("{}[{}][{}] = {} is not a probability", what, r, m, p));
  }
  return std::clamp(p, 0.0, 1.0);
}

void check_shape(const FractionalSolution& frac, const ProblemInstance& inst) {
  if (frac.x.rows() != inst.request_count() || frac.x.cols() != inst.mec_count() ||
      frac.y.size() != inst.request_count() || inst.replicas.size() != inst.request_count()) {
    throw DimensionMismatchError("fractional solution does not match instance");
  }
}

}  // namespace

IntegralSolution randomized_round(const FractionalSolution& frac, const ProblemInstance& inst,
                                  std::uint64_t seed) {
  check_shape(frac, inst);
  const std::size_t R = inst.request_count();
  const std::size_t M = inst.mec_count();
  Rng rng(seed);
  IntegralSolution out = IntegralSolution::zeros(R, M);
  for (std::size_t r = 0; r < R; ++r) {
    int placed = 0;
    for (std::size_t m = 0; m < M; ++m) {
      const double p = checked_probability(frac.x(r, m), "x", r, m);
      if (rng.bernoulli(p)) {
        out.x(r, m) = 1;
        ++placed;
      }
    }
    if (placed >= inst.replicas[r]) {
      const double p = checked_probability(frac.y[r], "y", r, 0);
      out.y[r] = rng.bernoulli(p) ? 1 : 0;
    }
    assert(out.y[r] == 0 || placed >= inst.replicas[r]);
  }
  return out;
}

std::vector<std::pair<IntegralSolution, SolutionMetrics>> rounding_ensemble(
    const FractionalSolution& frac, const ProblemInstance& inst, std::size_t n_seeds,
    std::uint64_t seed0) {
  if (n_seeds == 0) throw DomainError("ensemble needs at least one seed");
  std::vector<std::pair<IntegralSolution, SolutionMetrics>> out;
  out.reserve(n_seeds);
  for (std::size_t i = 0; i < n_seeds; ++i) {
    IntegralSolution sol = randomized_round(frac, inst, seed0 + i);
    SolutionMetrics metrics = evaluate_solution(inst, sol);
    out.emplace_back(std::move(sol), std::move(metrics));
  }
  return out;
}

double gate_pass_probability(const FractionalSolution& frac, const ProblemInstance& inst,
                             std::size_t request) {
  check_shape(frac, inst);
  const std::size_t M = inst.mec_count();
  // dist[k] = Pr[exactly k successes so far]
  std::vector<double> dist(M + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double p = checked_probability(frac.x(request, m), "x", request, m);
    for (std::size_t k = m + 1; k > 0; --k) dist[k] = dist[k] * (1 - p) + dist[k - 1] * p;
    dist[0] *= 1 - p;
  }
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(inst.replicas[request]); k <= M; ++k) tail += dist[k];
  return std::clamp(tail, 0.0, 1.0);
}

double expected_rounded_reward(const FractionalSolution& frac, const ProblemInstance& inst) {
  double total = 0.0;
  for (std::size_t r = 0; r < inst.request_count(); ++r) {
    total += inst.requests[r].reward * std::clamp(frac.y[r], 0.0, 1.0) *
             gate_pass_probability(frac, inst, r);
  }
  return total;
}

}  // namespace mecplace
