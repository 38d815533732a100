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

#include "mecplace/availsim.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mecplace/errors.hpp"
#include "support/oracles.hpp"

namespace mecplace {
namespace {

using testing::instance_with_replicas;
using testing::mec;
using testing::request;

ProblemInstance ThreeMecs() {
  return instance_with_replicas(
      {mec(0, 9, 9, 99, 99), mec(1, 9, 9, 99, 99), mec(2, 9, 9, 99, 99)},
      {request(0, 1, 1, 1, 1, 1, 0.01), request(1, 1, 1, 1, 1, 1, 0.001),
       request(2, 1, 1, 1, 1, 1, 0.0001), request(3, 1, 1, 1, 1, 1, 0.01)},
      {1, 2, 2, 1});
}

// Request r on its first `copies[r]` MECs, all served except copies == 0.
IntegralSolution Placed(const std::vector<int>& copies) {
  IntegralSolution sol = IntegralSolution::zeros(copies.size(), 3);
  for (std::size_t r = 0; r < copies.size(); ++r) {
    for (int m = 0; m < copies[r]; ++m) sol.x(r, static_cast<std::size_t>(m)) = 1;
    sol.y[r] = copies[r] > 0;
  }
  return sol;
}

TEST(SimulateAvailabilityTest, ClosedForm) {
  const ProblemInstance inst = ThreeMecs();
  const std::uint64_t n = 200000;
  const double p = 0.1;
  const auto rep = simulate_availability(inst, Placed({1, 2, 3, 0}), n, 17,
                                         {.jobs = 1, .replica_failure = p});
  for (int copies = 1; copies <= 3; ++copies) {
    const double expected = 1 - std::pow(p, copies);
    const double se = std::sqrt(expected * (1 - expected) / n);
    EXPECT_NEAR(rep.requests[copies - 1].availability, expected, 4 * se) << copies;
  }
  EXPECT_EQ(rep.requests[3].availability, 0);
  EXPECT_FALSE(rep.requests[3].pass);
  EXPECT_NEAR(rep.served_fraction, 0.75, 1e-12);
  const double pdr = (rep.requests[0].availability + rep.requests[1].availability +
                      rep.requests[2].availability) / 4;
  EXPECT_NEAR(rep.packet_delivery_ratio, pdr, 1e-12);
}

TEST(SimulateAvailabilityTest, DefaultsToInstanceFailureRate) {
  const auto rep = simulate_availability(ThreeMecs(), Placed({1, 2, 2, 1}), 100000, 3);
  EXPECT_DOUBLE_EQ(rep.replica_failure, 0.005);
  // Two copies: 1 - 2.5e-5.
  EXPECT_NEAR(rep.requests[1].availability, 1 - 2.5e-5, 4 * std::sqrt(2.5e-5 / 1e5));
  for (const auto& row : rep.requests) EXPECT_TRUE(row.pass) << row.request_id;
}

TEST(SimulateAvailabilityTest, NoFailuresMeansFullAvailability) {
  const auto rep = simulate_availability(ThreeMecs(), Placed({1, 1, 1, 1}), 1000, 3,
                                         {.jobs = 1, .replica_failure = 0.0});
  for (const auto& row : rep.requests) EXPECT_EQ(row.availability, 1);
}

TEST(SimulateAvailabilityTest, IndependentOfJobs) {
  const ProblemInstance inst = ThreeMecs();
  const IntegralSolution sol = Placed({1, 2, 3, 1});
  std::ostringstream a, b;
  write_availability_csv(simulate_availability(inst, sol, 5000, 9, {.jobs = 1, .replica_failure = std::nullopt}), a);
  write_availability_csv(simulate_availability(inst, sol, 5000, 9, {.jobs = 3, .replica_failure = std::nullopt}), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(SimulateAvailabilityTest, ExtraCopyNeverHurts) {
  const ProblemInstance inst = ThreeMecs();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto one = simulate_availability(inst, Placed({1, 1, 2, 1}), 20000, seed,
                                           {.jobs = 1, .replica_failure = 0.2});
    const auto two = simulate_availability(inst, Placed({2, 2, 3, 1}), 20000, seed,
                                           {.jobs = 1, .replica_failure = 0.2});
    for (std::size_t r = 0; r < 3; ++r) {
      EXPECT_GE(two.requests[r].delivered, one.requests[r].delivered);
    }
  }
}

TEST(SimulateAvailabilityTest, SingleCopyFailsStrictThreshold) {
  // One copy at eps_m = 0.005 cannot meet a 0.001 threshold.
  const auto rep = simulate_availability(ThreeMecs(), Placed({1, 1, 1, 1}), 100000, 5);
  EXPECT_TRUE(rep.requests[0].pass);
  EXPECT_FALSE(rep.requests[1].pass);
  EXPECT_FALSE(rep.requests[2].pass);
}

TEST(SimulateAvailabilityTest, Preconditions) {
  EXPECT_THROW(simulate_availability(ThreeMecs(), Placed({1, 1, 1, 1}), 999, 1), DomainError);
  EXPECT_THROW(simulate_availability(ThreeMecs(), Placed({1, 1}), 1000, 1),
               DimensionMismatchError);
}

TEST(FailureTailTest, MatchesDirectSum) {
  const std::uint64_t n = 30;
  const double p = 0.07;
  for (std::uint64_t k = 0; k <= n; ++k) {
    double direct = 0;
    for (std::uint64_t j = k; j <= n; ++j) {
      direct += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                         j * std::log(p) + (n - j) * std::log1p(-p));
    }
    EXPECT_NEAR(failure_tail_probability(k, n, p), std::min(1.0, direct), 1e-10) << k;
  }
}

TEST(AvailabilityCsvTest, Header) {
  std::ostringstream out;
  write_availability_csv(simulate_availability(ThreeMecs(), Placed({1, 1, 1, 1}), 1000, 1), out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "request_id,replicas,placements,served,trials,delivered,availability,target,p_value,pass");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

}  // namespace
}  // namespace mecplace
