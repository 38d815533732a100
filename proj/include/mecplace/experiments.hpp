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

#ifndef MECPLACE_EXPERIMENTS_HPP
#define MECPLACE_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mecplace/gen.hpp"
#include "mecplace/lp.hpp"
#include "mecplace/oracle.hpp"

namespace mecplace {

enum class Scheme : std::uint8_t {
  kLr,      // LP relaxation, fractional
  kRr,      // randomized rounding of the LP optimum
  kGreedy,  // the rounding followed by greedy repair
  kWoAvl,   // same pipeline with every replica count forced to one
  kExact,   // branch-and-bound optimum, small instances only
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

enum class SweepAxis : std::uint8_t { kRequests, kCpu, kRam, kUplink, kDownlink };

std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(std::string_view name);

struct MeanInterval {
  double mean = 0;
  double half_width = 0;
};

// Student-t interval. Throws DegenerateSampleError for fewer than two samples.
MeanInterval confidence_interval(const std::vector<double>& samples, double level = 0.95);

struct ExperimentConfig {
  // Instance distribution for the request-count sweep. Its seed is ignored:
  // run k uses an instance seed derived from (base_seed, k).
  GeneratorConfig generator{};
  std::vector<int> request_counts{30, 35, 40, 50, 60};

  // Resource sweeps vary one capacity at a time on identical MECs; the other
  // capacities and the request count stay at the baseline.
  std::map<Resource, std::vector<double>> resource_sweeps;
  ResourceVector resource_baseline{40, 48, 75, 250};
  int resource_baseline_requests = 50;

  int runs = 50;
  double confidence = 0.95;
  std::uint64_t base_seed = 1;
  std::vector<Scheme> schemes{Scheme::kLr, Scheme::kRr, Scheme::kGreedy, Scheme::kWoAvl};
  // The exact scheme is attempted only when R is at most this.
  int oracle_max_requests = 12;
  OracleLimits oracle_limits{};
  SimplexOptions simplex{};
  // By default one failed run aborts the experiment.
  bool exclude_failed_runs = false;
  std::size_t jobs = 1;

  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

enum class RunStatus : std::uint8_t {
  kOk,
  kFailed,   // solver error, excluded from the summary
  kSkipped,  // exact scheme on an instance above oracle_max_requests
  kLimit,    // exact scheme hit its node limit
};

std::string_view to_string(RunStatus s);

struct RunRecord {
  SweepAxis axis = SweepAxis::kRequests;
  double point = 0;
  int run = 0;
  std::uint64_t instance_seed = 0;
  Scheme scheme = Scheme::kLr;
  RunStatus status = RunStatus::kOk;
  std::string message;  // error text when failed
  double reward = 0;
  double served_pct = 0;
  ResourceVector utilization_pct{};  // sum of loads over sum of capacities
  bool capacity_violated = false;
  double seconds = 0;
};

struct BoundRecord {
  SweepAxis axis = SweepAxis::kRequests;
  double point = 0;
  int run = 0;
  double mu_opt = 0;
  std::optional<double> objective_factor;
  std::optional<double> min_capacity_factor;
  std::optional<double> max_capacity_factor;
  double rr_max_load_ratio = 0;  // largest RR load / capacity over MECs and resources
};

struct SummaryRow {
  SweepAxis axis = SweepAxis::kRequests;
  double point = 0;
  Scheme scheme = Scheme::kLr;
  std::string metric;
  double mean = 0;
  std::optional<double> half_width;  // unset with fewer than two samples
  int n_runs = 0;
  int n_failed = 0;
};

struct ExperimentReport {
  std::vector<RunRecord> runs;
  std::vector<BoundRecord> bounds;
  std::vector<SummaryRow> summary;  // reward, served %, utilizations, violation rate
  std::vector<SummaryRow> timing;   // metric "seconds"
  int failed_runs = 0;
};

// Runs every (sweep point, run) pair; the fold into the report is ordered by
// point then run, so the output does not depend on `jobs`.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Column layouts are listed in the README.
void write_summary_csv(const ExperimentReport& report, std::ostream& out);
void write_runs_csv(const ExperimentReport& report, std::ostream& out);
void write_bounds_csv(const ExperimentReport& report, std::ostream& out);
void write_timing_csv(const ExperimentReport& report, std::ostream& out);

// Writes summary.csv, runs.csv, bounds.csv and timing.csv, creating `dir`.
// Everything except timing.csv is a function of the config alone.
void write_experiment_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace mecplace

#endif  // MECPLACE_EXPERIMENTS_HPP
