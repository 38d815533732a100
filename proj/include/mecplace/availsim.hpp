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

#ifndef MECPLACE_AVAILSIM_HPP
#define MECPLACE_AVAILSIM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "mecplace/model.hpp"

namespace mecplace {

struct AvailabilityOptions {
  std::size_t jobs = 1;
  // Per-copy failure probability; defaults to the instance's vnf + pm failure.
  std::optional<double> replica_failure;
  // Level of the one-sided binomial test behind RequestAvailability::pass.
  double confidence = 0.99;
};

struct RequestAvailability {
  int request_id = 0;
  int replicas = 0;    // required copies
  int placements = 0;  // copies actually placed
  bool served = false;
  std::uint64_t delivered = 0;
  double availability = 0;  // delivered / trials
  double target = 0;        // 1 - failure_threshold
  // Probability of seeing at least this many failed trials if the true
  // failure rate sat exactly at the threshold.
  double p_value = 0;
  // Served and not significantly worse than the target.
  bool pass = false;
};

struct AvailabilityReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double replica_failure = 0;
  std::vector<RequestAvailability> requests;
  // Delivered trials over all requests and trials; unserved requests count
  // as never delivered.
  double packet_delivery_ratio = 0;
  // Fraction of requests served at the edge, the latency surrogate.
  double served_fraction = 0;
};

// Each trial fails every placed copy independently. A copy's outcome depends
// only on (seed, request, trial, MEC), so adding a copy never turns a
// delivered trial into a lost one, and the result does not depend on `jobs`.
AvailabilityReport simulate_availability(const ProblemInstance& inst, const IntegralSolution& sol,
                                         std::uint64_t trials, std::uint64_t seed,
                                         const AvailabilityOptions& options = {});

// P[X >= failures] for X ~ Binomial(trials, failure_threshold).
double failure_tail_probability(std::uint64_t failures, std::uint64_t trials,
                                double failure_threshold);

// Columns: request_id,replicas,placements,served,trials,delivered,availability,
// target,p_value,pass
void write_availability_csv(const AvailabilityReport& report, std::ostream& out);

}  // namespace mecplace

#endif  // MECPLACE_AVAILSIM_HPP
