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

#ifndef MECPLACE_BOUNDS_HPP
#define MECPLACE_BOUNDS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mecplace/model.hpp"

namespace mecplace {

// Chernoff slack for a capacity row: delta = 3 ln(R) / mu + 3. The matching
// violation factor is 1 + delta = 3 ln(R) / mu + 4. Both require mu > 0.
double capacity_delta(std::size_t request_count, double mu);
double capacity_factor(std::size_t request_count, double mu);

// Objective slack delta_opt = sqrt(4 ln(R) / mu_opt).
double objective_delta(std::size_t request_count, double mu_opt);

struct ResourceBound {
  double alpha = 0;    // largest demand for this resource over all requests
  double lp_load = 0;  // sum over r of x~[r][m] * demand
  double mu = 0;       // lp_load / alpha
  // Unset when mu == 0: nothing is placed fractionally, no bound is needed.
  std::optional<double> delta;
  std::optional<double> factor;
  // The factor allows more load than every request together could create.
  bool vacuous = false;
};

struct BoundReport {
  std::size_t request_count = 0;
  std::size_t mec_count = 0;
  double mec_to_request_ratio = 0;
  // per_mec[m][resource]
  std::vector<std::array<ResourceBound, kResourceCount>> per_mec;

  double alpha_opt = 0;  // largest reward
  double mu_opt = 0;     // sum of reward * y~ over alpha_opt
  std::optional<double> delta_opt;
  std::optional<double> objective_factor;  // 1 - delta_opt, may be negative
  bool objective_vacuous = false;          // factor <= 0
};

BoundReport compute_bound_report(const FractionalSolution& frac, const ProblemInstance& inst);

// Violation factor 1 + delta for one MEC and resource; nullopt when mu == 0.
std::optional<double> violation_factor(const FractionalSolution& frac, const ProblemInstance& inst,
                                       Resource resource, std::size_t mec);

// 1 - delta_opt; nullopt when mu_opt == 0.
std::optional<double> objective_bound_factor(const FractionalSolution& frac,
                                             const ProblemInstance& inst);

struct ExceedanceOptions {
  std::uint64_t seed0 = 1;
  // Replace the Chernoff factor by a fixed multiplier of the LP load (used to
  // study concentration trends); nullopt keeps the per-MEC factor.
  std::optional<double> fixed_factor;
};

struct ExceedanceReport {
  std::size_t runs = 0;
  std::size_t request_count = 0;
  double mec_to_request_ratio = 0;
  // Fraction of runs in which some MEC's load on the resource went above its
  // threshold (factor times LP load).
  std::array<double, kResourceCount> exceedance_fraction{};
  double any_exceedance_fraction = 0;
  // Largest load / capacity seen on any MEC over all runs.
  std::array<double, kResourceCount> max_load_ratio{};
  // Union-bound prediction per resource, 1 / R^2.
  double predicted_fraction = 0;
  BoundReport bounds;
};

// Rounds `frac` n_seeds times (seeds seed0, seed0+1, ...) and compares the
// realized per-MEC loads with the Chernoff thresholds.
ExceedanceReport empirical_violation_check(const ProblemInstance& inst,
                                           const FractionalSolution& frac, std::size_t n_seeds,
                                           const ExceedanceOptions& options = {});

}  // namespace mecplace

#endif  // MECPLACE_BOUNDS_HPP
