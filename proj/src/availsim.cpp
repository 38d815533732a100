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

#include <algorithm>
#include <thread>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mecplace/errors.hpp"
#include "mecplace/random.hpp"

namespace mecplace {

namespace {

constexpr std::uint64_t kMinTrials = 1000;

bool copy_fails(std::uint64_t request_seed, std::uint64_t trial, std::size_t mec, double p) {
  const std::uint64_t bits = splitmix64(splitmix64(request_seed ^ splitmix64(trial)) + mec);
  return to_unit_interval(bits) < p;
}

}  // namespace

double failure_tail_probability(std::uint64_t failures, std::uint64_t trials,
                                double failure_threshold) {
  if (failures == 0) return 1.0;
  if (failure_threshold <= 0) return 0.0;
  if (failure_threshold >= 1) return 1.0;
  const boost::math::binomial dist(static_cast<double>(trials), failure_threshold);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(failures - 1)));
}

AvailabilityReport simulate_availability(const ProblemInstance& inst, const IntegralSolution& sol,
                                         std::uint64_t trials, std::uint64_t seed,
                                         const AvailabilityOptions& options) {
  validate(inst);
  const std::size_t R = inst.request_count();
  const std::size_t M = inst.mec_count();
  if (sol.y.size() != R || sol.x.rows() != R || sol.x.cols() != M) {
    throw DimensionMismatchError("solution does not match instance");
  }
  if (trials < kMinTrials) {
    throw DomainError(fmt::format("availability simulation needs at least {} trials", kMinTrials));
  }
  const double p = options.replica_failure.value_or(service_failure_prob(inst.failure_model));
  if (!(p >= 0 && p <= 1)) throw DomainError("replica failure probability must lie in [0,1]");
  if (!(options.confidence > 0 && options.confidence < 1)) {
    throw DomainError("confidence must lie in (0,1)");
  }

  std::vector<std::vector<std::size_t>> hosts(R);
  std::vector<std::uint64_t> request_seed(R);
  for (std::size_t r = 0; r < R; ++r) {
    request_seed[r] = derive_seed(seed, {static_cast<std::uint64_t>(r)});
    if (!sol.y[r]) continue;
    for (std::size_t m = 0; m < M; ++m) {
      if (sol.x(r, m)) hosts[r].push_back(m);
    }
  }

  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(options.jobs, trials));
  std::vector<std::vector<std::uint64_t>> partial(jobs, std::vector<std::uint64_t>(R, 0));
  auto work = [&](std::size_t j) {
    const std::uint64_t begin = trials * j / jobs;
    const std::uint64_t end = trials * (j + 1) / jobs;
    for (std::size_t r = 0; r < R; ++r) {
      if (hosts[r].empty()) continue;
      std::uint64_t delivered = 0;
      for (std::uint64_t t = begin; t < end; ++t) {
        delivered += std::any_of(hosts[r].begin(), hosts[r].end(), [&](std::size_t m) {
          return !copy_fails(request_seed[r], t, m, p);
        });
      }
      partial[j][r] = delivered;
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(work, j);
    for (auto& t : threads) t.join();
  }

  AvailabilityReport report;
  report.trials = trials;
  report.seed = seed;
  report.replica_failure = p;
  std::uint64_t total_delivered = 0;
  std::size_t served = 0;
  const double alpha = 1.0 - options.confidence;
  for (std::size_t r = 0; r < R; ++r) {
    RequestAvailability row;
    row.request_id = inst.requests[r].id;
    row.replicas = inst.replicas[r];
    row.placements = sol.placements(r);
    row.served = sol.y[r] != 0;
    for (const auto& part : partial) row.delivered += part[r];
    row.availability = static_cast<double>(row.delivered) / static_cast<double>(trials);
    row.target = 1.0 - inst.requests[r].failure_threshold;
    row.p_value = failure_tail_probability(trials - row.delivered, trials,
                                           inst.requests[r].failure_threshold);
    row.pass = row.served && row.p_value > alpha;
    total_delivered += row.delivered;
    served += row.served;
    report.requests.push_back(row);
  }
  if (R > 0) {
    report.packet_delivery_ratio =
        static_cast<double>(total_delivered) / (static_cast<double>(trials) * R);
    report.served_fraction = static_cast<double>(served) / R;
  }
  return report;
}

void write_availability_csv(const AvailabilityReport& report, std::ostream& out) {
  out << "request_id,replicas,placements,served,trials,delivered,availability,target,p_value,pass\n";
  for (const auto& row : report.requests) {
    fmt::print(out, "{},{},{},{},{},{},{:.10g},{:.10g},{:.6g},{}\n", row.request_id, row.replicas,
               row.placements, row.served ? 1 : 0, report.trials, row.delivered, row.availability,
               row.target, row.p_value, row.pass ? 1 : 0);
  }
}

}  // namespace mecplace
