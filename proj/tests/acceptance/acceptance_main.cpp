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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Thresholds are fixed here and must not be relaxed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mecplace/availsim.hpp"
#include "mecplace/bounds.hpp"
#include "mecplace/errors.hpp"
#include "mecplace/experiments.hpp"
#include "mecplace/gen.hpp"
#include "mecplace/lp.hpp"
#include "mecplace/oracle.hpp"
#include "mecplace/random.hpp"
#include "mecplace/repair.hpp"
#include "mecplace/rounding.hpp"
#include "mecplace/serialize.hpp"
#include "support/oracles.hpp"

namespace mecplace {
namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double SummaryMean(const ExperimentReport& rep, Scheme scheme, const std::string& metric) {
  for (const SummaryRow& row : rep.summary) {
    if (row.scheme == scheme && row.metric == metric) return row.mean;
  }
  throw Error(fmt::format("no summary row for {} {}", to_string(scheme), metric));
}

// The default setup shared by criteria 1-3: 10 MECs, R = 50, 50 runs.
const ExperimentReport& DefaultStudy() {
  static const ExperimentReport report = [] {
    ExperimentConfig cfg;
    cfg.request_counts = {50};
    cfg.runs = 50;
    cfg.base_seed = 1;
    return run_experiment(cfg);
  }();
  return report;
}

Verdict OptimalityGap() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentReport& rep = DefaultStudy();
  const double lr = SummaryMean(rep, Scheme::kLr, "reward");
  const double rr = SummaryMean(rep, Scheme::kRr, "reward");
  const double greedy = SummaryMean(rep, Scheme::kGreedy, "reward");
  return {rr >= 0.88 * lr && greedy >= 0.78 * lr && rep.failed_runs == 0,
          fmt::format("LR {:.2f}, RR {:.2f} ({:.3f} of LR, need 0.88), Greedy {:.2f} ({:.3f} of "
                      "LR, need 0.78), {:.1f}s",
                      lr, rr, rr / lr, greedy, greedy / lr, Seconds(start))};
}

Verdict BaselineDirection() {
  const ExperimentReport& rep = DefaultStudy();
  const double greedy = SummaryMean(rep, Scheme::kGreedy, "reward");
  const double woavl = SummaryMean(rep, Scheme::kWoAvl, "reward");
  return {woavl <= 0.6 * greedy,
          fmt::format("Wo-Avl {:.2f} = {:.3f} of Greedy {:.2f} (need <= 0.6)", woavl,
                      woavl / greedy, greedy)};
}

Verdict ServedFraction() {
  const ExperimentReport& rep = DefaultStudy();
  const double lr = SummaryMean(rep, Scheme::kLr, "served_pct");
  const double greedy = SummaryMean(rep, Scheme::kGreedy, "served_pct");
  const double woavl = SummaryMean(rep, Scheme::kWoAvl, "served_pct");
  // Every run must contain requests that need two or more copies.
  GeneratorConfig cfg;
  bool redundant_everywhere = true;
  for (int run = 0; run < 50; ++run) {
    cfg.seed = derive_seed(1, {static_cast<std::uint64_t>(run)});
    const ProblemInstance inst = generate(cfg);
    redundant_everywhere = redundant_everywhere &&
                           std::any_of(inst.replicas.begin(), inst.replicas.end(),
                                       [](int p) { return p >= 2; });
  }
  return {redundant_everywhere && greedy >= 0.75 * lr && woavl <= 0.65 * greedy,
          fmt::format("served %: LR {:.1f}, Greedy {:.1f} ({:.3f} of LR, need >= 0.75), "
                      "Wo-Avl {:.1f} ({:.3f} of Greedy, need <= 0.65)",
                      lr, greedy, greedy / lr, woavl, woavl / greedy)};
}

ProblemInstance SandwichInstance(std::uint64_t seed) {
  if (seed % 2 == 0) return testing::random_small_instance(seed, 10, 3);
  Rng rng(seed);
  GeneratorConfig cfg;
  cfg.mec_count = static_cast<int>(rng.uniform_int(1, 3));
  cfg.request_count = static_cast<int>(rng.uniform_int(1, 10));
  cfg.seed = seed;
  return generate(cfg);
}

Verdict OracleSandwich() {
  const auto start = std::chrono::steady_clock::now();
  int violations = 0;
  double worst_mismatch = 0;
  OracleLimits exhaustive_limits;
  exhaustive_limits.max_nodes = 100'000'000;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const ProblemInstance inst = SandwichInstance(seed);
    const FractionalSolution frac = solve_relaxation(inst);
    const IntegralSolution greedy =
        greedy_repair(inst, randomized_round(frac, inst, derive_seed(seed, {1})));
    const ExactResult bb = solve_exact(inst);
    const ExactResult ex = solve_exact(inst, exhaustive_limits, OracleMode::kExhaustive);
    const double g = evaluate_solution(inst, greedy).total_reward;
    if (!(g <= bb.objective + 1e-6 && bb.objective <= frac.objective + 1e-6) ||
        !testing::is_feasible(inst, bb.solution)) {
      ++violations;
    }
    worst_mismatch = std::max(worst_mismatch, std::abs(bb.objective - ex.objective));
  }
  const double elapsed = Seconds(start);
  return {violations == 0 && worst_mismatch <= 1e-6 && elapsed < 120,
          fmt::format("200 instances, {} sandwich violations, max |B&B - exhaustive| {:.2e}, {:.1f}s",
                      violations, worst_mismatch, elapsed)};
}

Verdict RoundingExpectations() {
  GeneratorConfig cfg;
  cfg.seed = 1;
  const ProblemInstance inst = generate(cfg);
  const FractionalSolution frac = solve_relaxation(inst);
  const std::size_t n = 10000;
  const std::size_t M = inst.mec_count();
  std::vector<ResourceVector> sum(M), sum_sq(M);
  double reward = 0, reward_sq = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const IntegralSolution sol = randomized_round(frac, inst, 1'000'000 + s);
    const SolutionMetrics m = evaluate_solution(inst, sol);
    reward += m.total_reward;
    reward_sq += m.total_reward * m.total_reward;
    for (std::size_t j = 0; j < M; ++j) {
      for (std::size_t i = 0; i < kResourceCount; ++i) {
        sum[j][i] += m.loads[j][i];
        sum_sq[j][i] += m.loads[j][i] * m.loads[j][i];
      }
    }
  }
  const auto lp_loads = fractional_loads(inst, frac);
  int load_failures = 0;
  double worst_z = -1e300;
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      const double mean = sum[j][i] / n;
      const double se = std::sqrt(std::max(0.0, sum_sq[j][i] / n - mean * mean) / (n - 1));
      if (mean > lp_loads[j][i] + 3 * se + 1e-9) ++load_failures;
      if (se > 0) worst_z = std::max(worst_z, (mean - lp_loads[j][i]) / se);
    }
  }
  const double mean_reward = reward / n;
  const double se_reward = std::sqrt((reward_sq / n - mean_reward * mean_reward) / (n - 1));
  const double expected = testing::gated_expectation(frac, inst);
  const double z = (mean_reward - expected) / se_reward;
  return {load_failures == 0 && std::abs(z) <= 3,
          fmt::format("{} load cells above LP+3SE (max z {:.2f}); mean reward {:.3f} vs gated "
                      "expectation {:.3f} (z = {:.2f}, LP {:.3f})",
                      load_failures, worst_z, mean_reward, expected, z, frac.objective)};
}

Verdict BoundValidity() {
  GeneratorConfig cfg;
  cfg.seed = 2;
  const ProblemInstance inst = generate(cfg);
  const FractionalSolution frac = solve_relaxation(inst);
  const ExceedanceReport rep = empirical_violation_check(inst, frac, 1000, {.seed0 = 1, .fixed_factor = std::nullopt});
  return {rep.any_exceedance_fraction <= 0.05,
          fmt::format("R = {}, 1000 roundings, exceedance fraction {:.4f} (need <= 0.05, "
                      "union-bound prediction {:.1e})",
                      rep.request_count, rep.any_exceedance_fraction, rep.predicted_fraction)};
}

Verdict AvailabilityGuarantee() {
  std::vector<MecNode> mecs;
  for (int m = 0; m < 3; ++m) mecs.push_back(testing::mec(m, 10, 10, 100, 100));
  std::vector<ServiceRequest> reqs = {testing::request(0, 1, 1, 1, 1, 1, 0.01),
                                      testing::request(1, 1, 1, 1, 1, 1, 0.001),
                                      testing::request(2, 1, 1, 1, 1, 1, 0.0001)};
  const ProblemInstance inst = make_instance(mecs, reqs, FailureModel{0.001, 0.004});
  auto placed = [&](int less) {
    IntegralSolution sol = IntegralSolution::zeros(3, 3);
    for (std::size_t r = 0; r < 3; ++r) {
      const int copies = inst.replicas[r] - (r == 1 ? less : 0);
      for (int m = 0; m < copies; ++m) sol.x(r, static_cast<std::size_t>(m)) = 1;
      sol.y[r] = 1;
    }
    return sol;
  };
  const auto full = simulate_availability(inst, placed(0), 100000, 2024);
  const auto short_one = simulate_availability(inst, placed(1), 100000, 2024);
  bool ok = true;
  std::string detail = fmt::format("replicas {}/{}/{}", inst.replicas[0], inst.replicas[1],
                                   inst.replicas[2]);
  for (const auto& row : full.requests) {
    ok = ok && row.pass;
    detail += fmt::format("; eps_r {:g}: {:.5f} (p {:.3f})", 1 - row.target, row.availability,
                          row.p_value);
  }
  const auto& weak = short_one.requests[1];
  ok = ok && !weak.pass;
  detail += fmt::format("; one copy short at 0.001: {:.5f} (p {:.1e}, fails)", weak.availability,
                        weak.p_value);
  return {ok, detail};
}

Verdict SolverCorrectness() {
  int mismatches = 0, feasible = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const LinearProgram lp = testing::random_program(seed, 6);
    const auto expected = testing::vertex_enumeration_max(lp);
    try {
      const LpResult res = solve_lp(lp);
      if (!expected) {
        ++mismatches;
        continue;
      }
      ++feasible;
      worst = std::max(worst, std::abs(res.objective - *expected));
      if (std::abs(res.objective - *expected) > 1e-6) ++mismatches;
    } catch (const InfeasibleProgramError&) {
      if (expected) ++mismatches;
    }
  }
  ExperimentConfig cfg;
  cfg.request_counts = {6, 8, 10, 12};
  cfg.generator.mec_count = 4;
  cfg.runs = 10;
  cfg.schemes = {Scheme::kLr, Scheme::kExact};
  cfg.oracle_max_requests = 12;
  const ExperimentReport rep = run_experiment(cfg);
  int dominance_failures = 0, compared = 0;
  for (const RunRecord& exact : rep.runs) {
    if (exact.scheme != Scheme::kExact || exact.status != RunStatus::kOk) continue;
    for (const RunRecord& lr : rep.runs) {
      if (lr.scheme == Scheme::kLr && lr.point == exact.point && lr.run == exact.run) {
        ++compared;
        if (lr.reward < exact.reward - 1e-6) ++dominance_failures;
      }
    }
  }
  return {mismatches == 0 && dominance_failures == 0 && compared == 40,
          fmt::format("100 programs ({} feasible), {} mismatches, max gap {:.2e}; LP >= exact on "
                      "{}/{} experiment instances",
                      feasible, mismatches, worst, compared - dominance_failures, compared)};
}

Verdict Determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "mecplace_acceptance_determinism";
  fs::remove_all(root);
  ExperimentConfig cfg;
  cfg.request_counts = {30, 50};
  cfg.runs = 5;
  cfg.base_seed = 20;
  write_experiment_outputs(run_experiment(cfg), root / "a");
  cfg.jobs = 2;
  write_experiment_outputs(run_experiment(cfg), root / "b");
  bool same = true;
  for (const char* name : {"summary.csv", "runs.csv", "bounds.csv"}) {
    same = same && read_text_file(root / "a" / name) == read_text_file(root / "b" / name);
  }
  fs::remove_all(root);
  return {same, "summary.csv, runs.csv and bounds.csv compared byte for byte across two runs"};
}

}  // namespace
}  // namespace mecplace

int main() {
  using mecplace::Verdict;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 optimality gap (RR, Greedy vs LR)", mecplace::OptimalityGap},
      {"2 baseline direction (Wo-Avl vs Greedy reward)", mecplace::BaselineDirection},
      {"3 served fraction (Greedy vs LR, Wo-Avl vs Greedy)", mecplace::ServedFraction},
      {"4 oracle sandwich (Greedy <= exact <= LP)", mecplace::OracleSandwich},
      {"5 rounding expectations", mecplace::RoundingExpectations},
      {"6 capacity bound validity", mecplace::BoundValidity},
      {"7 availability guarantee", mecplace::AvailabilityGuarantee},
      {"8 LP solver correctness", mecplace::SolverCorrectness},
      {"9 determinism of experiment CSVs", mecplace::Determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
