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

#include "mecplace/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mecplace/bounds.hpp"
#include "mecplace/errors.hpp"
#include "mecplace/random.hpp"
#include "mecplace/repair.hpp"
#include "mecplace/rounding.hpp"
#include "mecplace/serialize.hpp"

namespace mecplace {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 5> kSchemeNames{{
    {Scheme::kLr, "lr"},
    {Scheme::kRr, "rr"},
    {Scheme::kGreedy, "greedy"},
    {Scheme::kWoAvl, "wo-avl"},
    {Scheme::kExact, "exact"},
}};

constexpr std::array<std::pair<SweepAxis, std::string_view>, 5> kAxisNames{{
    {SweepAxis::kRequests, "requests"},
    {SweepAxis::kCpu, "cpu"},
    {SweepAxis::kRam, "ram"},
    {SweepAxis::kUplink, "uplink"},
    {SweepAxis::kDownlink, "downlink"},
}};

SweepAxis axis_for(Resource r) {
  switch (r) {
    case Resource::kCpu: return SweepAxis::kCpu;
    case Resource::kRam: return SweepAxis::kRam;
    case Resource::kUplink: return SweepAxis::kUplink;
    case Resource::kDownlink: return SweepAxis::kDownlink;
  }
  return SweepAxis::kCpu;
}

// Stream tags under the per-run instance seed.
constexpr std::uint64_t kRoundingStream = 1;
constexpr std::uint64_t kWoAvlRoundingStream = 2;

struct SweepPoint {
  SweepAxis axis;
  double value;
  GeneratorConfig generator;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  for (int count : cfg.request_counts) {
    GeneratorConfig g = cfg.generator;
    g.request_count = count;
    points.push_back({SweepAxis::kRequests, static_cast<double>(count), g});
  }
  for (const auto& [resource, values] : cfg.resource_sweeps) {
    for (double v : values) {
      GeneratorConfig g = cfg.generator;
      ResourceVector caps = cfg.resource_baseline;
      caps[index_of(resource)] = v;
      const auto cpu = static_cast<std::int64_t>(std::llround(caps[0]));
      const auto ram = static_cast<std::int64_t>(std::llround(caps[1]));
      g.cpu_range = {cpu, cpu};
      g.ram_range = {ram, ram};
      g.uplink_capacity = caps[2];
      g.downlink_capacity = caps[3];
      g.request_count = cfg.resource_baseline_requests;
      points.push_back({axis_for(resource), v, g});
    }
  }
  return points;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Clears the placements of unadmitted requests; they do not count toward
// reported utilization.
IntegralSolution admitted_only(const IntegralSolution& sol) {
  IntegralSolution out = sol;
  for (std::size_t r = 0; r < out.y.size(); ++r) {
    if (!out.y[r]) {
      for (auto& v : out.x.row(r)) v = 0;
    }
  }
  return out;
}

ResourceVector utilization_pct(const ProblemInstance& inst, const std::vector<ResourceVector>& loads) {
  ResourceVector total_load{}, total_cap{};
  for (std::size_t m = 0; m < inst.mec_count(); ++m) {
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      total_load[i] += loads[m][i];
      total_cap[i] += inst.mecs[m].capacities()[i];
    }
  }
  ResourceVector pct{};
  for (std::size_t i = 0; i < kResourceCount; ++i) {
    pct[i] = total_cap[i] > 0 ? 100.0 * total_load[i] / total_cap[i] : 0.0;
  }
  return pct;
}

void fill_from_metrics(RunRecord& rec, const ProblemInstance& inst, const IntegralSolution& sol) {
  const SolutionMetrics metrics = evaluate_solution(inst, sol);
  rec.reward = metrics.total_reward;
  rec.served_pct = inst.request_count() ? 100.0 * metrics.served_count / inst.request_count() : 0;
  rec.utilization_pct = utilization_pct(inst, metrics.loads);
  rec.capacity_violated = std::any_of(metrics.violations.begin(), metrics.violations.end(),
                                      [](const Violation& v) {
                                        return v.kind >= ConstraintKind::kCpu &&
                                               v.kind <= ConstraintKind::kDownlink;
                                      });
}

struct TaskResult {
  std::vector<RunRecord> runs;
  std::optional<BoundRecord> bound;
  std::exception_ptr error;
};

TaskResult run_task(const ExperimentConfig& cfg, const SweepPoint& point, int run) {
  TaskResult out;
  const std::uint64_t seed = derive_seed(cfg.base_seed, {static_cast<std::uint64_t>(run)});
  auto base_record = [&](Scheme s) {
    RunRecord rec;
    rec.axis = point.axis;
    rec.point = point.value;
    rec.run = run;
    rec.instance_seed = seed;
    rec.scheme = s;
    return rec;
  };
  const auto wants = [&](Scheme s) {
    return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
  };
  try {
    GeneratorConfig g = point.generator;
    g.seed = seed;
    const ProblemInstance inst = generate(g);
    std::map<Scheme, RunRecord> records;

    if (wants(Scheme::kLr) || wants(Scheme::kRr) || wants(Scheme::kGreedy)) {
      auto start = std::chrono::steady_clock::now();
      const FractionalSolution frac = solve_relaxation(inst, cfg.simplex);
      const double lp_seconds = seconds_since(start);

      RunRecord lr = base_record(Scheme::kLr);
      lr.reward = frac.objective;
      double served = 0;
      for (double y : frac.y) served += y;
      lr.served_pct = inst.request_count() ? 100.0 * served / inst.request_count() : 0;
      lr.utilization_pct = utilization_pct(inst, fractional_loads(inst, frac));
      lr.seconds = lp_seconds;
      records[Scheme::kLr] = lr;

      start = std::chrono::steady_clock::now();
      const IntegralSolution rounded =
          randomized_round(frac, inst, derive_seed(seed, {kRoundingStream}));
      const double round_seconds = seconds_since(start);
      RunRecord rr = base_record(Scheme::kRr);
      fill_from_metrics(rr, inst, admitted_only(rounded));
      rr.seconds = lp_seconds + round_seconds;
      records[Scheme::kRr] = rr;

      start = std::chrono::steady_clock::now();
      const IntegralSolution repaired = greedy_repair(inst, rounded);
      RunRecord greedy = base_record(Scheme::kGreedy);
      fill_from_metrics(greedy, inst, repaired);
      greedy.seconds = rr.seconds + seconds_since(start);
      records[Scheme::kGreedy] = greedy;

      BoundRecord bound;
      bound.axis = point.axis;
      bound.point = point.value;
      bound.run = run;
      const BoundReport report = compute_bound_report(frac, inst);
      bound.mu_opt = report.mu_opt;
      bound.objective_factor = report.objective_factor;
      for (const auto& mec : report.per_mec) {
        for (const auto& rb : mec) {
          if (!rb.factor) continue;
          bound.min_capacity_factor = std::min(bound.min_capacity_factor.value_or(*rb.factor), *rb.factor);
          bound.max_capacity_factor = std::max(bound.max_capacity_factor.value_or(*rb.factor), *rb.factor);
        }
      }
      for (const auto& u : evaluate_solution(inst, rounded).utilization) {
        for (double v : u) bound.rr_max_load_ratio = std::max(bound.rr_max_load_ratio, v);
      }
      out.bound = bound;
    }

    if (wants(Scheme::kWoAvl)) {
      const auto start = std::chrono::steady_clock::now();
      const ProblemInstance stripped = strip_availability(inst);
      const FractionalSolution frac = solve_relaxation(stripped, cfg.simplex);
      const IntegralSolution rounded =
          randomized_round(frac, stripped, derive_seed(seed, {kWoAvlRoundingStream}));
      const IntegralSolution repaired = greedy_repair(stripped, rounded);
      RunRecord rec = base_record(Scheme::kWoAvl);
      fill_from_metrics(rec, inst, apply_true_redundancy(inst, repaired));
      rec.seconds = seconds_since(start);
      records[Scheme::kWoAvl] = rec;
    }

    if (wants(Scheme::kExact)) {
      RunRecord rec = base_record(Scheme::kExact);
      if (static_cast<int>(inst.request_count()) > cfg.oracle_max_requests) {
        rec.status = RunStatus::kSkipped;
      } else {
        const auto start = std::chrono::steady_clock::now();
        try {
          const ExactResult exact = solve_exact(inst, cfg.oracle_limits);
          fill_from_metrics(rec, inst, exact.solution);
        } catch (const OracleLimitError& e) {
          rec.status = RunStatus::kLimit;
          rec.message = e.what();
        }
        rec.seconds = seconds_since(start);
      }
      records[Scheme::kExact] = rec;
    }

    for (Scheme s : cfg.schemes) out.runs.push_back(records.at(s));
  } catch (const Error& e) {
    if (!cfg.exclude_failed_runs) {
      out.error = std::current_exception();
      return out;
    }
    out.runs.clear();
    out.bound.reset();
    for (Scheme s : cfg.schemes) {
      RunRecord rec = base_record(s);
      rec.status = RunStatus::kFailed;
      rec.message = e.what();
      out.runs.push_back(rec);
    }
  }
  return out;
}

std::string fmt_num(double v) { return fmt::format("{:.10g}", v); }

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : std::string(); }

std::string fmt_point(double v) { return fmt::format("{:g}", v); }

void summarize(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points,
               ExperimentReport& report) {
  using Getter = double (*)(const RunRecord&);
  static const std::vector<std::pair<std::string, Getter>> metrics{
      {"reward", [](const RunRecord& r) { return r.reward; }},
      {"served_pct", [](const RunRecord& r) { return r.served_pct; }},
      {"util_cpu_pct", [](const RunRecord& r) { return r.utilization_pct[0]; }},
      {"util_ram_pct", [](const RunRecord& r) { return r.utilization_pct[1]; }},
      {"util_uplink_pct", [](const RunRecord& r) { return r.utilization_pct[2]; }},
      {"util_downlink_pct", [](const RunRecord& r) { return r.utilization_pct[3]; }},
      {"violation_rate", [](const RunRecord& r) { return r.capacity_violated ? 1.0 : 0.0; }},
  };
  for (const SweepPoint& point : points) {
    for (Scheme scheme : cfg.schemes) {
      std::vector<const RunRecord*> ok;
      int failed = 0;
      for (const RunRecord& rec : report.runs) {
        if (rec.axis != point.axis || rec.point != point.value || rec.scheme != scheme) continue;
        if (rec.status == RunStatus::kOk) ok.push_back(&rec);
        if (rec.status == RunStatus::kFailed || rec.status == RunStatus::kLimit) ++failed;
      }
      if (ok.empty()) continue;
      auto row_for = [&](const std::string& name, Getter get) {
        std::vector<double> samples;
        for (const RunRecord* rec : ok) samples.push_back(get(*rec));
        SummaryRow row;
        row.axis = point.axis;
        row.point = point.value;
        row.scheme = scheme;
        row.metric = name;
        row.n_runs = static_cast<int>(samples.size());
        row.n_failed = failed;
        if (samples.size() >= 2) {
          const MeanInterval ci = confidence_interval(samples, cfg.confidence);
          row.mean = ci.mean;
          row.half_width = ci.half_width;
        } else {
          row.mean = samples.front();
        }
        return row;
      };
      for (const auto& [name, get] : metrics) report.summary.push_back(row_for(name, get));
      report.timing.push_back(
          row_for("seconds", [](const RunRecord& r) { return r.seconds; }));
    }
  }
}

template <typename T>
void read_into(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("experiment config: bad value for '{}': {}", key, e.what()));
  }
}

Resource resource_from_string(std::string_view name) {
  for (Resource r : kAllResources) {
    if (to_string(r) == name) return r;
  }
  throw ParseError(fmt::format("experiment config: unknown resource '{}'", name));
}

}  // namespace

std::string_view to_string(Scheme s) {
  for (const auto& [k, name] : kSchemeNames) {
    if (k == s) return name;
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  for (const auto& [k, n] : kSchemeNames) {
    if (n == name) return k;
  }
  throw DomainError(fmt::format("unknown scheme '{}'", name));
}

std::string_view to_string(SweepAxis a) {
  for (const auto& [k, name] : kAxisNames) {
    if (k == a) return name;
  }
  return "?";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  for (const auto& [k, n] : kAxisNames) {
    if (n == name) return k;
  }
  throw DomainError(fmt::format("unknown sweep axis '{}'", name));
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kFailed: return "failed";
    case RunStatus::kSkipped: return "skipped";
    case RunStatus::kLimit: return "limit";
  }
  return "?";
}

MeanInterval confidence_interval(const std::vector<double>& samples, double level) {
  if (samples.size() < 2) {
    throw DegenerateSampleError("a confidence interval needs at least two samples");
  }
  if (!(level > 0 && level < 1)) throw DomainError("confidence level must lie in (0,1)");
  const double n = static_cast<double>(samples.size());
  double mean = 0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  const boost::math::students_t dist(n - 1);
  const double t = boost::math::quantile(dist, 0.5 + level / 2);
  return {mean, t * sd / std::sqrt(n)};
}

void ExperimentConfig::validate() const {
  generator.validate();
  if (runs < 2) throw DomainError("experiments need at least two runs per point");
  if (!(confidence > 0 && confidence < 1)) throw DomainError("confidence must lie in (0,1)");
  if (schemes.empty()) throw DomainError("no schemes selected");
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size()) {
    throw DomainError("duplicate scheme");
  }
  if (request_counts.empty() && resource_sweeps.empty()) throw DomainError("empty sweep");
  for (int c : request_counts) {
    if (c < 1) throw DomainError("request counts must be positive");
  }
  for (const auto& [resource, values] : resource_sweeps) {
    for (double v : values) {
      if (!(v > 0)) throw DomainError("swept capacities must be positive");
      if ((resource == Resource::kCpu || resource == Resource::kRam) && v != std::round(v)) {
        throw DomainError("cpu and ram capacities are integers");
      }
    }
  }
  for (double v : resource_baseline) {
    if (!(v > 0)) throw DomainError("baseline capacities must be positive");
  }
  if (resource_baseline_requests < 1) throw DomainError("baseline request count must be positive");
  if (jobs < 1) throw DomainError("jobs must be at least one");
}

ExperimentConfig experiment_config_from_json(const json& doc) {
  check_version(doc, "experiment config");
  static const std::set<std::string> known{
      "version", "generator", "request_counts", "resource_sweeps", "resource_baseline",
      "runs", "confidence", "base_seed", "schemes", "oracle_max_requests", "oracle_max_nodes",
      "exclude_failed_runs"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ParseError(fmt::format("experiment config: unknown key '{}'", key));
  }
  ExperimentConfig cfg;
  if (doc.contains("generator")) {
    json g = doc.at("generator");
    if (!g.contains("version")) g["version"] = kFormatVersion;
    cfg.generator = generator_config_from_json(g);
  }
  read_into(doc, "request_counts", cfg.request_counts);
  if (doc.contains("resource_sweeps")) {
    std::map<std::string, std::vector<double>> sweeps;
    read_into(doc, "resource_sweeps", sweeps);
    for (const auto& [name, values] : sweeps) cfg.resource_sweeps[resource_from_string(name)] = values;
  }
  if (doc.contains("resource_baseline")) {
    std::map<std::string, double> base;
    read_into(doc, "resource_baseline", base);
    for (const auto& [name, value] : base) {
      if (name == "requests") {
        cfg.resource_baseline_requests = static_cast<int>(value);
        if (cfg.resource_baseline_requests != value) {
          throw ParseError("experiment config: baseline request count must be an integer");
        }
      } else {
        cfg.resource_baseline[index_of(resource_from_string(name))] = value;
      }
    }
  }
  read_into(doc, "runs", cfg.runs);
  read_into(doc, "confidence", cfg.confidence);
  read_into(doc, "base_seed", cfg.base_seed);
  if (doc.contains("schemes")) {
    std::vector<std::string> names;
    read_into(doc, "schemes", names);
    cfg.schemes.clear();
    for (const auto& n : names) {
      try {
        cfg.schemes.push_back(scheme_from_string(n));
      } catch (const DomainError& e) {
        throw ParseError(fmt::format("experiment config: {}", e.what()));
      }
    }
  }
  read_into(doc, "oracle_max_requests", cfg.oracle_max_requests);
  read_into(doc, "oracle_max_nodes", cfg.oracle_limits.max_nodes);
  read_into(doc, "exclude_failed_runs", cfg.exclude_failed_runs);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ParseError(fmt::format("experiment config: {}", e.what()));
  }
  return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  json generator = generator_config_to_json(cfg.generator);
  generator.erase("seed");
  json sweeps = json::object();
  for (const auto& [resource, values] : cfg.resource_sweeps) sweeps[std::string(to_string(resource))] = values;
  json baseline = json::object();
  for (Resource r : kAllResources) baseline[std::string(to_string(r))] = cfg.resource_baseline[index_of(r)];
  baseline["requests"] = cfg.resource_baseline_requests;
  std::vector<std::string> schemes;
  for (Scheme s : cfg.schemes) schemes.emplace_back(to_string(s));
  return {{"version", kFormatVersion},
          {"generator", generator},
          {"request_counts", cfg.request_counts},
          {"resource_sweeps", sweeps},
          {"resource_baseline", baseline},
          {"runs", cfg.runs},
          {"confidence", cfg.confidence},
          {"base_seed", cfg.base_seed},
          {"schemes", schemes},
          {"oracle_max_requests", cfg.oracle_max_requests},
          {"oracle_max_nodes", cfg.oracle_limits.max_nodes},
          {"exclude_failed_runs", cfg.exclude_failed_runs}};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<SweepPoint> points = sweep_points(cfg);
  const std::size_t task_count = points.size() * static_cast<std::size_t>(cfg.runs);
  std::vector<TaskResult> results(task_count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= task_count || abort.load()) return;
      results[i] = run_task(cfg, points[i / cfg.runs], static_cast<int>(i % cfg.runs));
      if (results[i].error) abort.store(true);
    }
  };
  const std::size_t jobs = std::min(cfg.jobs, std::max<std::size_t>(1, task_count));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const TaskResult& res : results) {
    if (res.error) std::rethrow_exception(res.error);
  }

  ExperimentReport report;
  for (TaskResult& res : results) {
    bool failed = false;
    for (RunRecord& rec : res.runs) {
      failed = failed || rec.status == RunStatus::kFailed;
      report.runs.push_back(std::move(rec));
    }
    report.failed_runs += failed;
    if (res.bound) report.bounds.push_back(*res.bound);
  }
  summarize(cfg, points, report);
  return report;
}

void write_summary_csv(const ExperimentReport& report, std::ostream& out) {
  out << "axis,point,scheme,metric,mean,ci_half_width,n_runs,n_failed\n";
  for (const SummaryRow& row : report.summary) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", to_string(row.axis), fmt_point(row.point),
               to_string(row.scheme), row.metric, fmt_num(row.mean), fmt_opt(row.half_width),
               row.n_runs, row.n_failed);
  }
}

void write_runs_csv(const ExperimentReport& report, std::ostream& out) {
  out << "axis,point,run,instance_seed,scheme,status,reward,served_pct,util_cpu_pct,util_ram_pct,"
         "util_uplink_pct,util_downlink_pct,capacity_violated\n";
  for (const RunRecord& rec : report.runs) {
    const bool has_values = rec.status == RunStatus::kOk;
    auto value = [&](double v) { return has_values ? fmt_num(v) : std::string(); };
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(rec.axis),
               fmt_point(rec.point), rec.run, rec.instance_seed, to_string(rec.scheme),
               to_string(rec.status), value(rec.reward), value(rec.served_pct),
               value(rec.utilization_pct[0]), value(rec.utilization_pct[1]),
               value(rec.utilization_pct[2]), value(rec.utilization_pct[3]),
               has_values ? (rec.capacity_violated ? "1" : "0") : "");
  }
}

void write_bounds_csv(const ExperimentReport& report, std::ostream& out) {
  out << "axis,point,run,mu_opt,objective_factor,min_capacity_factor,max_capacity_factor,"
         "rr_max_load_ratio\n";
  for (const BoundRecord& b : report.bounds) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", to_string(b.axis), fmt_point(b.point), b.run,
               fmt_num(b.mu_opt), fmt_opt(b.objective_factor), fmt_opt(b.min_capacity_factor),
               fmt_opt(b.max_capacity_factor), fmt_num(b.rr_max_load_ratio));
  }
}

void write_timing_csv(const ExperimentReport& report, std::ostream& out) {
  out << "axis,point,scheme,mean_seconds,ci_half_width,n_runs\n";
  for (const SummaryRow& row : report.timing) {
    fmt::print(out, "{},{},{},{},{},{}\n", to_string(row.axis), fmt_point(row.point),
               to_string(row.scheme), fmt_num(row.mean), fmt_opt(row.half_width), row.n_runs);
  }
}

void write_experiment_outputs(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(),
                              ec ? ec.message() : "not a directory"));
  }
  const std::pair<const char*, void (*)(const ExperimentReport&, std::ostream&)> files[] = {
      {"summary.csv", write_summary_csv},
      {"runs.csv", write_runs_csv},
      {"bounds.csv", write_bounds_csv},
      {"timing.csv", write_timing_csv},
  };
  for (const auto& [name, writer] : files) {
    std::ostringstream text;
    writer(report, text);
    write_text_file(dir / name, text.str());
  }
}

}  // namespace mecplace
