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

#include <gtest/gtest.h>

#include "mecplace/gen.hpp"
#include "mecplace/lp.hpp"
#include "mecplace/rounding.hpp"
#include "support/oracles.hpp"

namespace mecplace {
namespace {

using testing::instance_with_replicas;
using testing::mec;
using testing::request;

TEST(GreedyRepairTest, FeasibleInputUnchanged) {
  const ProblemInstance inst = instance_with_replicas(
      {mec(0, 10, 10, 100, 100)}, {request(0, 3, 1, 1, 1, 5), request(1, 3, 1, 1, 1, 7)}, {1, 1});
  IntegralSolution sol = IntegralSolution::zeros(2, 1);
  sol.x(0, 0) = 1;
  sol.y[0] = 1;
  sol.x(1, 0) = 1;  // placed but unserved; still feasible, so kept
  EXPECT_EQ(greedy_repair(inst, sol), sol);
}

TEST(GreedyRepairTest, DropsLowestReward) {
  const ProblemInstance inst = instance_with_replicas(
      {mec(0, 4, 100, 100, 100)}, {request(0, 3, 1, 1, 1, 5), request(1, 3, 1, 1, 1, 7)}, {1, 1});
  IntegralSolution sol = IntegralSolution::zeros(2, 1);
  sol.x(0, 0) = sol.x(1, 0) = 1;
  sol.y[0] = sol.y[1] = 1;
  const IntegralSolution out = greedy_repair(inst, sol);
  EXPECT_EQ(out.y, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(out.x(0, 0), 0);
  EXPECT_EQ(evaluate_solution(inst, out).total_reward, 7);
}

TEST(GreedyRepairTest, TiesDropTheLargerId) {
  const ProblemInstance inst = instance_with_replicas(
      {mec(0, 4, 100, 100, 100)}, {request(0, 3, 1, 1, 1, 5), request(1, 3, 1, 1, 1, 5)}, {1, 1});
  IntegralSolution sol = IntegralSolution::zeros(2, 1);
  sol.x(0, 0) = sol.x(1, 0) = 1;
  sol.y[0] = sol.y[1] = 1;
  EXPECT_EQ(greedy_repair(inst, sol).y, (std::vector<std::uint8_t>{1, 0}));
}

TEST(GreedyRepairTest, PrunesWastedPlacementsFirst) {
  // Request 0 sits on the saturated MEC without being served; releasing it is
  // enough, so both paying requests survive.
  const ProblemInstance inst = instance_with_replicas(
      {mec(0, 6, 100, 100, 100)},
      {request(0, 3, 1, 1, 1, 9), request(1, 3, 1, 1, 1, 2), request(2, 3, 1, 1, 1, 3)},
      {1, 1, 1});
  IntegralSolution sol = IntegralSolution::zeros(3, 1);
  sol.x(0, 0) = sol.x(1, 0) = sol.x(2, 0) = 1;
  sol.y[1] = sol.y[2] = 1;
  const IntegralSolution out = greedy_repair(inst, sol);
  EXPECT_EQ(out.y, (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_EQ(out.x(0, 0), 0);
  EXPECT_TRUE(testing::is_feasible(inst, out));
}

TEST(GreedyRepairTest, DroppingReleasesEveryCopy) {
  const ProblemInstance inst = instance_with_replicas(
      {mec(0, 4, 100, 100, 100), mec(1, 4, 100, 100, 100)},
      {request(0, 3, 1, 1, 1, 1), request(1, 3, 1, 1, 1, 8)}, {2, 1});
  IntegralSolution sol = IntegralSolution::zeros(2, 2);
  sol.x(0, 0) = sol.x(0, 1) = 1;
  sol.y[0] = 1;
  sol.x(1, 0) = 1;
  sol.y[1] = 1;
  const IntegralSolution out = greedy_repair(inst, sol);
  EXPECT_EQ(out.y, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(out.x(0, 1), 0);
}

TEST(GreedyRepairTest, TrimOptionKeepsRequestWithSpareCopies) {
  const ProblemInstance inst = instance_with_replicas(
      {mec(0, 4, 100, 100, 100), mec(1, 4, 100, 100, 100)},
      {request(0, 3, 1, 1, 1, 1), request(1, 3, 1, 1, 1, 8)}, {1, 1});
  IntegralSolution sol = IntegralSolution::zeros(2, 2);
  sol.x(0, 0) = sol.x(0, 1) = 1;
  sol.y[0] = 1;
  sol.x(1, 0) = 1;
  sol.y[1] = 1;
  EXPECT_EQ(greedy_repair(inst, sol).y, (std::vector<std::uint8_t>{0, 1}));
  const IntegralSolution trimmed = greedy_repair(inst, sol, {.trim_excess_replicas = true});
  EXPECT_EQ(trimmed.y, (std::vector<std::uint8_t>{1, 1}));
  EXPECT_TRUE(testing::is_feasible(inst, trimmed));
}

TEST(GreedyRepairTest, RoundedSolutionsBecomeFeasibleSubsets) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    const ProblemInstance inst = generate(cfg);
    const FractionalSolution frac = solve_relaxation(inst);
    const IntegralSolution rounded = randomized_round(frac, inst, seed);
    const IntegralSolution repaired = greedy_repair(inst, rounded);
    EXPECT_TRUE(testing::is_feasible(inst, repaired));
    EXPECT_TRUE(evaluate_solution(inst, repaired).feasible);
    EXPECT_LE(testing::reward_of(inst, repaired), testing::reward_of(inst, rounded) + 1e-12);
    for (std::size_t r = 0; r < inst.request_count(); ++r) {
      EXPECT_LE(repaired.y[r], rounded.y[r]);
    }
  }
}

}  // namespace
}  // namespace mecplace
