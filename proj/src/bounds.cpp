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

#include "mecplace/bounds.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "mecplace/errors.hpp"
#include "mecplace/rounding.hpp"

namespace mecplace {

namespace {

void require_positive_mu(double mu) {
  if (!(mu > 0)) throw DomainError("Chernoff bound needs mu > 0");
}

}  // namespace

double capacity_delta(std::size_t request_count, double mu) {
  require_positive_mu(mu);
  return 3.0 * std::log(static_cast<double>(request_count)) / mu + 3.0;
}

double capacity_factor(std::size_t request_count, double mu) {
  require_positive_mu(mu);
  const double factor = 3.0 * std::log(static_cast<double>(request_count)) / mu + 4.0;
  assert(std::abs(factor - (1.0 + capacity_delta(request_count, mu))) <= 1e-9 * factor);
  return factor;
}

double objective_delta(std::size_t request_count, double mu_opt) {
  require_positive_mu(mu_opt);
  return std::sqrt(4.0 * std::log(static_cast<double>(request_count)) / mu_opt);
}

BoundReport compute_bound_report(const FractionalSolution& frac, const ProblemInstance& inst) {
  const std::size_t R = inst.request_count();
  const std::size_t M = inst.mec_count();
  if (frac.x.rows() != R || frac.x.cols() != M || frac.y.size() != R) {
    throw DimensionMismatchError("fractional solution does not match instance");
  }
  BoundReport rep;
  rep.request_count = R;
  rep.mec_count = M;
  rep.mec_to_request_ratio = R > 0 ? static_cast<double>(M) / static_cast<double>(R) : 0.0;

  ResourceVector alpha{};
  ResourceVector total_demand{};
  for (const auto& q : inst.requests) {
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      alpha[i] = std::max(alpha[i], q.demands()[i]);
      total_demand[i] += q.demands()[i];
    }
  }
  const auto loads = fractional_loads(inst, frac);
  rep.per_mec.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      ResourceBound& b = rep.per_mec[m][i];
      b.alpha = alpha[i];
      b.lp_load = loads[m][i];
      b.mu = alpha[i] > 0 ? loads[m][i] / alpha[i] : 0.0;
      if (b.mu > 0) {
        b.delta = capacity_delta(R, b.mu);
        b.factor = capacity_factor(R, b.mu);
        b.vacuous = *b.factor * b.lp_load >= total_demand[i];
      }
    }
  }

  double weighted = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    rep.alpha_opt = std::max(rep.alpha_opt, inst.requests[r].reward);
    weighted += inst.requests[r].reward * frac.y[r];
  }
  rep.mu_opt = rep.alpha_opt > 0 ? weighted / rep.alpha_opt : 0.0;
  if (rep.mu_opt > 0) {
    rep.delta_opt = objective_delta(R, rep.mu_opt);
    rep.objective_factor = 1.0 - *rep.delta_opt;
    rep.objective_vacuous = *rep.objective_factor <= 0.0;
  }
  return rep;
}

std::optional<double> violation_factor(const FractionalSolution& frac, const ProblemInstance& inst,
                                       Resource resource, std::size_t mec) {
  if (mec >= inst.mec_count()) throw DimensionMismatchError("MEC index out of range");
  return compute_bound_report(frac, inst).per_mec[mec][index_of(resource)].factor;
}

std::optional<double> objective_bound_factor(const FractionalSolution& frac,
                                             const ProblemInstance& inst) {
  return compute_bound_report(frac, inst).objective_factor;
}

ExceedanceReport empirical_violation_check(const ProblemInstance& inst,
                                           const FractionalSolution& frac, std::size_t n_seeds,
                                           const ExceedanceOptions& options) {
  if (n_seeds < 100) throw DomainError("empirical violation check needs at least 100 roundings");
  ExceedanceReport out;
  out.bounds = compute_bound_report(frac, inst);
  out.runs = n_seeds;
  out.request_count = inst.request_count();
  out.mec_to_request_ratio = out.bounds.mec_to_request_ratio;
  const double R = static_cast<double>(inst.request_count());
  out.predicted_fraction = R > 0 ? 1.0 / (R * R) : 0.0;

  const std::size_t M = inst.mec_count();
  // threshold[m][i], or negative when the bound is undefined (mu == 0).
  std::vector<ResourceVector> threshold(M);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      const ResourceBound& b = out.bounds.per_mec[m][i];
      if (!b.factor) {
        threshold[m][i] = -1.0;
      } else {
        threshold[m][i] = options.fixed_factor.value_or(*b.factor) * b.lp_load;
      }
    }
  }

  std::array<std::size_t, kResourceCount> hits{};
  std::size_t any_hits = 0;
  for (std::size_t s = 0; s < n_seeds; ++s) {
    const IntegralSolution sol = randomized_round(frac, inst, options.seed0 + s);
    const SolutionMetrics met = evaluate_solution(inst, sol);
    bool any = false;
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      bool hit = false;
      for (std::size_t m = 0; m < M; ++m) {
        out.max_load_ratio[i] = std::max(out.max_load_ratio[i], met.utilization[m][i]);
        const double thr = threshold[m][i];
        if (thr < 0) continue;
        if (met.loads[m][i] > thr + 1e-9 * std::max(1.0, thr)) hit = true;
      }
      hits[i] += hit;
      any = any || hit;
    }
    any_hits += any;
  }
  for (std::size_t i = 0; i < kResourceCount; ++i) {
    out.exceedance_fraction[i] = static_cast<double>(hits[i]) / static_cast<double>(n_seeds);
  }
  out.any_exceedance_fraction = static_cast<double>(any_hits) / static_cast<double>(n_seeds);
  return out;
}

}  // namespace mecplace
