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

#include "mecplace/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace mecplace {

namespace {

constexpr double kPruneSlack = 1e-9;
constexpr double kMaxPackableCapacity = 1 << 16;
constexpr std::size_t kCoverNodeLimit = 20000;

bool is_whole(double v) { return v >= 0 && v == std::floor(v); }

// Largest sum of a subset of `demands` not above `capacity`, found by a
// subset-sum table when all demands are whole numbers. Any integral placement
// on a MEC uses at most this much, so it can replace the capacity in a bound.
double packable(const std::vector<double>& demands, double capacity) {
  if (capacity <= 0) return 0;
  if (capacity > kMaxPackableCapacity) return capacity;
  for (double d : demands) {
    if (!is_whole(d)) return capacity;
  }
  const auto cap = static_cast<std::size_t>(std::floor(capacity + kCapacityTolerance));
  std::vector<char> reach(cap + 1, 0);
  reach[0] = 1;
  for (double d : demands) {
    const auto w = static_cast<std::size_t>(d);
    if (w == 0 || w > cap) continue;
    for (std::size_t v = cap; v >= w; --v) reach[v] |= reach[v - w];
  }
  std::size_t best = cap;
  while (!reach[best]) --best;
  return static_cast<double>(best);
}

// Smallest total reward of a set of items whose needs cover every deficit.
// Falls back to the smallest single reward (at least one item must go) when
// the search grows past its node budget.
class CoverSearch {
 public:
  CoverSearch(std::vector<double> rewards, std::vector<ResourceVector> needs,
              ResourceVector deficit)
      : rewards_(std::move(rewards)), needs_(std::move(needs)), deficit_(deficit) {
    order_.resize(rewards_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return rewards_[a] < rewards_[b]; });
  }

  double min_cost() {
    if (rewards_.empty()) return 0;
    best_ = std::numeric_limits<double>::infinity();
    visit(0, 0.0, deficit_);
    if (nodes_ > kCoverNodeLimit) return rewards_[order_.front()];
    return std::isfinite(best_) ? best_ : 0.0;
  }

 private:
  void visit(std::size_t k, double cost, const ResourceVector& left) {
    if (++nodes_ > kCoverNodeLimit) return;
    if (cost >= best_) return;
    if (std::all_of(left.begin(), left.end(), [](double v) { return v <= kPruneSlack; })) {
      best_ = cost;
      return;
    }
    for (std::size_t i = k; i < order_.size(); ++i) {
      const std::size_t j = order_[i];
      if (cost + rewards_[j] >= best_) break;  // rewards ascend from here on
      ResourceVector next = left;
      for (std::size_t d = 0; d < kResourceCount; ++d) next[d] -= needs_[j][d];
      visit(i + 1, cost + rewards_[j], next);
    }
  }

  std::vector<double> rewards_;
  std::vector<ResourceVector> needs_;
  ResourceVector deficit_;
  std::vector<std::size_t> order_;
  double best_ = 0;
  std::size_t nodes_ = 0;
};

class ExactSearch {
 public:
  ExactSearch(const ProblemInstance& inst, const OracleLimits& limits, OracleMode mode)
      : inst_(inst), limits_(limits), mode_(mode), R_(inst.request_count()), M_(inst.mec_count()) {
    order_.resize(R_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    // Rich requests first: good incumbents early tighten the bound.
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return inst_.requests[a].reward > inst_.requests[b].reward;
    });
    suffix_reward_.assign(R_ + 1, 0.0);
    for (std::size_t k = R_; k-- > 0;) {
      suffix_reward_[k] = suffix_reward_[k + 1] + inst_.requests[order_[k]].reward;
    }
    residual_.reserve(M_);
    for (const auto& m : inst_.mecs) residual_.push_back(m.capacities());
    current_ = IntegralSolution::zeros(R_, M_);
    best_.solution = current_;
    best_.objective = 0.0;
  }

  ExactResult run() {
    root_bound_ = solve_lp(build_relaxed_program(inst_), limits_.simplex).objective;
    search(0, 0.0);
    best_.nodes = nodes_;
    return best_;
  }

 private:
  void search(std::size_t k, double reward) {
    if (++nodes_ > limits_.max_nodes) {
      best_.nodes = nodes_;
      throw OracleLimitError(
          fmt::format("exact search exceeded {} nodes (incumbent {:.6g}, bound {:.6g})",
                      limits_.max_nodes, best_.objective, root_bound_),
          best_, root_bound_);
    }
    if (reward > best_.objective + kPruneSlack) {
      best_.objective = reward;
      best_.solution = current_;
    }
    if (k == R_) return;
    if (reward + suffix_reward_[k] <= best_.objective + kPruneSlack) return;
    if (mode_ == OracleMode::kBranchAndBound) {
      const std::vector<std::size_t> rest(order_.begin() + static_cast<std::ptrdiff_t>(k),
                                          order_.end());
      const std::vector<ResourceVector> caps = packable_capacities(rest);
      if (reward + suffix_reward_[k] - drop_bound(rest, caps) <= best_.objective + kPruneSlack) {
        return;
      }
      const LpResult lp = residual_lp(rest, caps);
      if (reward + lp.objective <= best_.objective + kPruneSlack) return;
      // A rounded copy of the relaxation often matches its bound (always when
      // the relaxation is integral), which closes the subtree.
      complete_from_lp(rest, lp, reward);
      if (reward + lp.objective <= best_.objective + kPruneSlack) return;
    }

    const std::size_t r = order_[k];
    const auto demand = inst_.requests[r].demands();
    const std::size_t need = static_cast<std::size_t>(inst_.replicas[r]);
    const std::size_t max_size = mode_ == OracleMode::kExhaustiveAnySize ? M_ : need;
    if (need <= M_) {
      for (std::size_t size = need; size <= max_size; ++size) {
        enumerate_subsets(k, r, demand, size, 0, 0, reward + inst_.requests[r].reward);
      }
    }
    search(k + 1, reward);  // drop r
  }

  // Lexicographic enumeration of `size`-subsets of MECs that fit the demand.
  void enumerate_subsets(std::size_t k, std::size_t r, const ResourceVector& demand,
                         std::size_t size, std::size_t chosen, std::size_t start, double reward) {
    if (chosen == size) {
      current_.y[r] = 1;
      search(k + 1, reward);
      current_.y[r] = 0;
      return;
    }
    for (std::size_t m = start; m + (size - chosen) <= M_; ++m) {
      if (!fits(demand, m)) continue;
      place(r, m, demand, +1);
      enumerate_subsets(k, r, demand, size, chosen + 1, m + 1, reward);
      place(r, m, demand, -1);
    }
  }

  bool fits(const ResourceVector& demand, std::size_t m) const {
    return fits_in(demand, m, residual_[m]);
  }

  bool fits_in(const ResourceVector& demand, std::size_t m, const ResourceVector& residual) const {
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      const double cap = inst_.mecs[m].capacities()[i];
      if (demand[i] > residual[i] + kCapacityTolerance * std::max(1.0, cap)) return false;
    }
    return true;
  }

  void place(std::size_t r, std::size_t m, const ResourceVector& demand, int sign) {
    for (std::size_t i = 0; i < kResourceCount; ++i) residual_[m][i] -= sign * demand[i];
    current_.x(r, m) = sign > 0 ? 1 : 0;
  }

  // Residual capacities, shrunk to what the remaining requests can fill.
  std::vector<ResourceVector> packable_capacities(const std::vector<std::size_t>& rest) const {
    std::vector<ResourceVector> caps(M_);
    std::vector<double> demands;
    for (std::size_t m = 0; m < M_; ++m) {
      for (std::size_t i = 0; i < kResourceCount; ++i) {
        demands.clear();
        for (std::size_t r : rest) demands.push_back(inst_.requests[r].demands()[i]);
        caps[m][i] = packable(demands, std::max(0.0, residual_[m][i]));
      }
    }
    return caps;
  }

  // Lower bound on the reward that must be given up among `rest` when their
  // copies need more of some resource than all MECs together can hold.
  double drop_bound(const std::vector<std::size_t>& rest,
                    const std::vector<ResourceVector>& caps) const {
    ResourceVector deficit{};
    std::vector<double> rewards;
    std::vector<ResourceVector> needs;
    for (std::size_t r : rest) {
      ResourceVector need = inst_.requests[r].demands();
      for (double& v : need) v *= inst_.replicas[r];
      for (std::size_t i = 0; i < kResourceCount; ++i) deficit[i] += need[i];
      rewards.push_back(inst_.requests[r].reward);
      needs.push_back(need);
    }
    bool short_somewhere = false;
    for (std::size_t i = 0; i < kResourceCount; ++i) {
      double total = 0;
      double largest = 0;
      for (const auto& c : caps) {
        total += c[i];
        largest = std::max(largest, c[i]);
      }
      deficit[i] -= total;
      short_somewhere = short_somewhere || deficit[i] > kCapacityTolerance * std::max(1.0, largest);
    }
    if (!short_somewhere) return 0;
    for (double& v : deficit) v = std::max(0.0, v);
    return CoverSearch(std::move(rewards), std::move(needs), deficit).min_cost();
  }

  LpResult residual_lp(const std::vector<std::size_t>& rest,
                       const std::vector<ResourceVector>& caps) const {
    return solve_lp(build_relaxed_program(inst_, rest, caps), limits_.simplex);
  }

  // Greedy completion guided by the relaxation: requests by decreasing y~,
  // each on the MECs with the largest x~ that still fit.
  void complete_from_lp(const std::vector<std::size_t>& rest, const LpResult& lp, double reward) {
    const std::size_t n = rest.size();
    auto x_of = [&](std::size_t j, std::size_t m) { return lp.values[j * M_ + m]; };
    auto y_of = [&](std::size_t j) { return lp.values[n * M_ + j]; };
    std::vector<std::size_t> by_y(n);
    std::iota(by_y.begin(), by_y.end(), std::size_t{0});
    std::stable_sort(by_y.begin(), by_y.end(),
                     [&](std::size_t a, std::size_t b) { return y_of(a) > y_of(b); });

    std::vector<ResourceVector> residual = residual_;
    IntegralSolution sol = current_;
    double total = reward;
    std::vector<std::size_t> mecs(M_), chosen;
    for (std::size_t j : by_y) {
      const std::size_t r = rest[j];
      const auto demand = inst_.requests[r].demands();
      std::iota(mecs.begin(), mecs.end(), std::size_t{0});
      std::stable_sort(mecs.begin(), mecs.end(),
                       [&](std::size_t a, std::size_t b) { return x_of(j, a) > x_of(j, b); });
      chosen.clear();
      for (std::size_t m : mecs) {
        if (chosen.size() == static_cast<std::size_t>(inst_.replicas[r])) break;
        if (fits_in(demand, m, residual[m])) chosen.push_back(m);
      }
      if (chosen.size() < static_cast<std::size_t>(inst_.replicas[r])) continue;
      for (std::size_t m : chosen) {
        for (std::size_t i = 0; i < kResourceCount; ++i) residual[m][i] -= demand[i];
        sol.x(r, m) = 1;
      }
      sol.y[r] = 1;
      total += inst_.requests[r].reward;
    }
    if (total > best_.objective + kPruneSlack) {
      best_.objective = total;
      best_.solution = std::move(sol);
    }
  }

  const ProblemInstance& inst_;
  OracleLimits limits_;
  OracleMode mode_;
  std::size_t R_, M_;
  std::vector<std::size_t> order_;
  std::vector<double> suffix_reward_;
  std::vector<ResourceVector> residual_;
  IntegralSolution current_;
  ExactResult best_;
  std::size_t nodes_ = 0;
  double root_bound_ = 0.0;
};

}  // namespace

ExactResult solve_exact(const ProblemInstance& inst, const OracleLimits& limits, OracleMode mode) {
  validate(inst);
  return ExactSearch(inst, limits, mode).run();
}

ProblemInstance strip_availability(const ProblemInstance& inst) {
  ProblemInstance out = inst;
  std::fill(out.replicas.begin(), out.replicas.end(), 1);
  return out;
}

IntegralSolution apply_true_redundancy(const ProblemInstance& inst, const IntegralSolution& sol) {
  if (sol.y.size() != inst.request_count() || sol.x.rows() != inst.request_count() ||
      sol.x.cols() != inst.mec_count()) {
    throw DimensionMismatchError("solution does not match instance");
  }
  IntegralSolution out = sol;
  for (std::size_t r = 0; r < inst.request_count(); ++r) {
    if (out.y[r] && out.placements(r) < inst.replicas[r]) {
      out.y[r] = 0;
      for (auto& v : out.x.row(r)) v = 0;
    }
  }
  return out;
}

}  // namespace mecplace
