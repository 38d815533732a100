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

#include "cli.hpp"

#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

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

namespace mecplace::cli {

namespace {

using nlohmann::json;

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Explicit flag, else the value stored in the config, else fresh entropy.
std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag,
                        const std::optional<std::uint64_t>& from_config, std::ostream& out) {
  if (flag) return *flag;
  if (from_config) return *from_config;
  const std::uint64_t seed = entropy_seed();
  fmt::print(out, "seed: {} (drawn; pass --seed {} to replay)\n", seed, seed);
  return seed;
}

void print_metrics(std::ostream& out, const ProblemInstance& inst, const SolutionMetrics& m) {
  fmt::print(out, "objective: {:.10g}\n", m.total_reward);
  fmt::print(out, "served: {} of {}\n", m.served_count, inst.request_count());
  for (Resource r : kAllResources) {
    fmt::print(out, "utilization_{}: {:.4f}\n", to_string(r), m.aggregate_utilization[index_of(r)]);
  }
  fmt::print(out, "feasible: {}\n", m.feasible ? "true" : "false");
  for (const Violation& v : m.violations) {
    fmt::print(out, "violation: {} index={} overshoot={:.6g}\n", to_string(v.kind), v.index,
               v.overshoot);
  }
}

void print_bound_report(std::ostream& out, const BoundReport& b) {
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.6g}", *v) : std::string("undefined");
  };
  fmt::print(out, "bounds: requests={} mecs={} mec_to_request_ratio={:.6g}\n", b.request_count,
             b.mec_count, b.mec_to_request_ratio);
  fmt::print(out, "bounds: objective alpha={:.6g} mu={:.6g} delta={} factor={}{}\n", b.alpha_opt,
             b.mu_opt, opt(b.delta_opt), opt(b.objective_factor),
             b.objective_vacuous ? " (vacuous)" : "");
  for (std::size_t m = 0; m < b.per_mec.size(); ++m) {
    for (Resource r : kAllResources) {
      const ResourceBound& rb = b.per_mec[m][index_of(r)];
      fmt::print(out, "bounds: mec={} {} lp_load={:.6g} alpha={:.6g} mu={:.6g} factor={}{}\n", m,
                 to_string(r), rb.lp_load, rb.alpha, rb.mu, opt(rb.factor),
                 rb.vacuous ? " (vacuous)" : "");
    }
  }
}

json fractional_to_json(const FractionalSolution& frac) {
  json x = json::array();
  for (std::size_t r = 0; r < frac.x.rows(); ++r) {
    const auto row = frac.x.row(r);
    x.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"version", kFormatVersion}, {"x", x}, {"y", frac.y}, {"objective", frac.objective}};
}

struct GenerateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorConfig cfg;
  std::optional<std::uint64_t> config_seed;
  if (!a.config.empty()) {
    const json doc = read_json_file(a.config);
    cfg = generator_config_from_json(doc);
    if (doc.contains("seed")) config_seed = cfg.seed;
  }
  cfg.seed = pick_seed(a.seed, config_seed, out);
  const ProblemInstance inst = generate(cfg);
  write_instance(a.output, inst);
  std::map<int, int> histogram;
  for (int p : inst.replicas) ++histogram[p];
  fmt::print(out, "mecs: {}\nrequests: {}\n", inst.mec_count(), inst.request_count());
  for (const auto& [replicas, count] : histogram) {
    fmt::print(out, "replicas {}: {}\n", replicas, count);
  }
  fmt::print(out, "seed: {}\nwrote: {}\n", cfg.seed, a.output);
  return kExitOk;
}

struct SolveArgs {
  std::string instance;
  std::string scheme;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_nodes;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const ProblemInstance inst = read_instance(a.instance);
  const Scheme scheme = scheme_from_string(a.scheme);
  SimplexOptions simplex;
  if (a.tolerance) simplex.tolerance = *a.tolerance;
  fmt::print(out, "scheme: {}\n", to_string(scheme));

  auto finish = [&](const IntegralSolution& sol) {
    print_metrics(out, inst, evaluate_solution(inst, sol));
    if (!a.output.empty()) write_solution(a.output, sol);
    return kExitOk;
  };

  switch (scheme) {
    case Scheme::kLr: {
      const FractionalSolution frac = solve_relaxation(inst, simplex);
      double served = 0;
      for (double y : frac.y) served += y;
      fmt::print(out, "objective: {:.10g}\nserved_fractional: {:.6g} of {}\n", frac.objective,
                 served, inst.request_count());
      const auto loads = fractional_loads(inst, frac);
      for (Resource r : kAllResources) {
        double load = 0, cap = 0;
        for (std::size_t m = 0; m < inst.mec_count(); ++m) {
          load += loads[m][index_of(r)];
          cap += inst.mecs[m].capacity(r);
        }
        fmt::print(out, "utilization_{}: {:.4f}\n", to_string(r), cap > 0 ? load / cap : 0.0);
      }
      fmt::print(out, "feasible: true\n");
      if (!a.output.empty()) write_text_file(a.output, dump_json(fractional_to_json(frac)));
      return kExitOk;
    }
    case Scheme::kRr:
    case Scheme::kGreedy: {
      const std::uint64_t seed = pick_seed(a.seed, std::nullopt, out);
      fmt::print(out, "seed: {}\n", seed);
      const FractionalSolution frac = solve_relaxation(inst, simplex);
      fmt::print(out, "lp_objective: {:.10g}\n", frac.objective);
      const IntegralSolution rounded = randomized_round(frac, inst, seed);
      if (scheme == Scheme::kRr) {
        print_bound_report(out, compute_bound_report(frac, inst));
        return finish(rounded);
      }
      return finish(greedy_repair(inst, rounded));
    }
    case Scheme::kWoAvl: {
      const std::uint64_t seed = pick_seed(a.seed, std::nullopt, out);
      fmt::print(out, "seed: {}\n", seed);
      const ProblemInstance stripped = strip_availability(inst);
      const FractionalSolution frac = solve_relaxation(stripped, simplex);
      const IntegralSolution rounded = randomized_round(frac, stripped, seed);
      return finish(apply_true_redundancy(inst, greedy_repair(stripped, rounded)));
    }
    case Scheme::kExact: {
      OracleLimits limits;
      limits.simplex = simplex;
      if (a.max_nodes) limits.max_nodes = *a.max_nodes;
      const ExactResult exact = solve_exact(inst, limits);
      fmt::print(out, "nodes: {}\n", exact.nodes);
      return finish(exact.solution);
    }
  }
  return kExitUsage;
}

struct ExperimentArgs {
  std::string config;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  bool exclude_failed = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  std::optional<std::uint64_t> config_seed;
  if (!a.config.empty()) {
    const json doc = read_json_file(a.config);
    cfg = experiment_config_from_json(doc);
    if (doc.contains("base_seed")) config_seed = cfg.base_seed;
  }
  cfg.base_seed = pick_seed(a.seed, config_seed, out);
  cfg.jobs = a.jobs;
  cfg.exclude_failed_runs = cfg.exclude_failed_runs || a.exclude_failed;
  const ExperimentReport report = run_experiment(cfg);
  write_experiment_outputs(report, a.output_dir);
  fmt::print(out, "base_seed: {}\nrecords: {}\nfailed_runs: {}\nwrote: {}\n", cfg.base_seed,
             report.runs.size(), report.failed_runs, a.output_dir);
  return report.failed_runs == 0 ? kExitOk : kExitSolve;
}

struct AvailsimArgs {
  std::string instance;
  std::string solution;
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::size_t jobs = 1;
  std::optional<double> replica_failure;
};

int cmd_availsim(const AvailsimArgs& a, std::ostream& out) {
  const ProblemInstance inst = read_instance(a.instance);
  const IntegralSolution sol = read_solution(a.solution);
  AvailabilityOptions options;
  options.jobs = a.jobs;
  options.replica_failure = a.replica_failure;
  const std::uint64_t seed = pick_seed(a.seed, std::nullopt, out);
  const AvailabilityReport report = simulate_availability(inst, sol, a.trials, seed, options);
  std::ostringstream csv;
  write_availability_csv(report, csv);
  if (a.output.empty()) {
    out << csv.str();
  } else {
    write_text_file(a.output, csv.str());
  }
  std::size_t passed = 0, served = 0;
  for (const auto& row : report.requests) {
    passed += row.pass;
    served += row.served;
  }
  fmt::print(out, "seed: {}\npacket_delivery_ratio: {:.8f}\nserved_fraction: {:.6f}\n"
                  "threshold_pass: {} of {} served\n",
             seed, report.packet_delivery_ratio, report.served_fraction, passed, served);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Availability-aware UPF placement on MEC nodes"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Draw a random instance");
  gen->add_option("--config", gen_args.config, "Generator config (JSON)")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_args.seed, "Random seed");
  gen->add_option("--output,-o", gen_args.output, "Instance file to write")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve an instance with one scheme");
  solve->add_option("--instance,-i", solve_args.instance, "Instance file")->required();
  solve->add_option("--scheme", solve_args.scheme, "lr, rr, greedy, exact or wo-avl")
      ->required()
      ->check(CLI::IsMember({"lr", "rr", "greedy", "exact", "wo-avl"}));
  solve->add_option("--seed", solve_args.seed, "Rounding seed");
  solve->add_option("--output,-o", solve_args.output, "Solution file to write");
  solve->add_option("--tol", solve_args.tolerance, "Simplex feasibility/optimality tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-nodes", solve_args.max_nodes, "Node limit of the exact search");

  ExperimentArgs exp_args;
  auto* exp = app.add_subcommand("experiment", "Run a sweep and write report CSVs");
  exp->add_option("--config", exp_args.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  exp->add_option("--output-dir,-o", exp_args.output_dir, "Directory for the CSVs")->required();
  exp->add_option("--seed", exp_args.seed, "Base seed (overrides the config)");
  exp->add_option("--jobs,-j", exp_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_flag("--exclude-failed", exp_args.exclude_failed,
                "Record failed runs and leave them out of the means instead of aborting");

  AvailsimArgs av_args;
  auto* av = app.add_subcommand("availsim", "Monte Carlo availability of a solution");
  av->add_option("--instance,-i", av_args.instance, "Instance file")->required();
  av->add_option("--solution,-s", av_args.solution, "Solution file")->required();
  av->add_option("--trials", av_args.trials, "Trials per request")->check(CLI::Range(1000ULL, 1000000000ULL));
  av->add_option("--seed", av_args.seed, "Random seed");
  av->add_option("--output,-o", av_args.output, "CSV file (default: standard output)");
  av->add_option("--jobs,-j", av_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  av->add_option("--replica-failure", av_args.replica_failure,
                 "Per-copy failure probability (default: from the instance)")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args, out);
    if (solve->parsed()) return cmd_solve(solve_args, out);
    if (exp->parsed()) return cmd_experiment(exp_args, out);
    if (av->parsed()) return cmd_availsim(av_args, out);
  } catch (const OracleLimitError& e) {
    fmt::print(err, "error: {}\nincumbent: {:.10g}\nbound: {:.10g}\ngap: {:.10g}\n", e.what(),
               e.incumbent().objective, e.bound(), e.gap());
    return kExitLimit;
  } catch (const ParseError& e) {
    fmt::print(err, "parse error: {}\n", e.what());
    return kExitParse;
  } catch (const InvalidModelError& e) {
    fmt::print(err, "invalid model: {}\n", e.what());
    return kExitParse;
  } catch (const DimensionMismatchError& e) {
    fmt::print(err, "dimension mismatch: {}\n", e.what());
    return kExitParse;
  } catch (const IoError& e) {
    fmt::print(err, "io error: {}\n", e.what());
    return kExitIo;
  } catch (const SolverError& e) {
    fmt::print(err, "solver error: {}\n", e.what());
    return kExitSolve;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mecplace::cli
