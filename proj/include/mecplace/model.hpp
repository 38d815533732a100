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

#ifndef MECPLACE_MODEL_HPP
#define MECPLACE_MODEL_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mecplace {

// The four capacity dimensions every MEC exposes and every request consumes.
enum class Resource : std::uint8_t { kCpu = 0, kRam = 1, kUplink = 2, kDownlink = 3 };

inline constexpr std::size_t kResourceCount = 4;
inline constexpr std::array<Resource, kResourceCount> kAllResources = {
    Resource::kCpu, Resource::kRam, Resource::kUplink, Resource::kDownlink};

std::string_view to_string(Resource r);

// Indexed by static_cast<std::size_t>(Resource).
using ResourceVector = std::array<double, kResourceCount>;

constexpr std::size_t index_of(Resource r) noexcept { return static_cast<std::size_t>(r); }

enum class UpfKind : std::uint8_t { kIdps, kFw, kNat, kTm, kVoc, kWoc };

std::string_view to_string(UpfKind k);
UpfKind upf_kind_from_string(std::string_view name);

struct MecNode {
  int id = 0;
  double cpu_capacity = 0;       // cores
  double ram_capacity = 0;       // GB
  double uplink_capacity = 0;    // Mbps
  double downlink_capacity = 0;  // Mbps

  double capacity(Resource r) const noexcept;
  ResourceVector capacities() const noexcept;
};

struct ServiceRequest {
  int id = 0;
  double cpu_demand = 0;
  double ram_demand = 0;
  double uplink_demand = 0;
  double downlink_demand = 0;
  double failure_threshold = 0;  // tolerated probability that the service is down
  double reward = 0;
  std::vector<UpfKind> upf_chain;

  double demand(Resource r) const noexcept;
  ResourceVector demands() const noexcept;
};

// Software failure of a UPF plus failure of its host machine. Both are
// per-site probabilities; a request's UPFs share one machine.
struct FailureModel {
  double vnf_failure = 0.001;
  double pm_failure = 0.004;
};

// Probability that one placed copy of a service is down: vnf + pm failure.
// Throws InvalidModelError unless the sum lies strictly inside (0,1).
double service_failure_prob(const FailureModel& fm);

// Smallest number of copies on distinct MECs so that the chance of all of
// them failing stays at or below `failure_threshold`. Never less than one.
// Throws DomainError if the threshold is outside (0,1).
int required_replicas(const FailureModel& fm, double failure_threshold);

// Same, from the per-copy failure probability directly.
int required_replicas(double replica_failure, double failure_threshold);

// Dense row-major matrix; rows are requests and columns MECs wherever it
// appears in this library.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T value = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

struct ProblemInstance {
  std::vector<MecNode> mecs;
  std::vector<ServiceRequest> requests;
  FailureModel failure_model;
  std::vector<int> replicas;  // one entry per request, each >= 1

  std::size_t mec_count() const noexcept { return mecs.size(); }
  std::size_t request_count() const noexcept { return requests.size(); }
};

// Builds an instance and fills `replicas` from the failure model.
ProblemInstance make_instance(std::vector<MecNode> mecs,
                              std::vector<ServiceRequest> requests,
                              FailureModel fm);

// Checks every type invariant; throws InvalidModelError / DimensionMismatchError.
void validate(const ProblemInstance& inst);

// Binary placement (x) and admission (y) decisions.
struct IntegralSolution {
  Matrix<std::uint8_t> x;
  std::vector<std::uint8_t> y;

  static IntegralSolution zeros(std::size_t requests, std::size_t mecs) {
    return {Matrix<std::uint8_t>(requests, mecs, 0), std::vector<std::uint8_t>(requests, 0)};
  }

  int placements(std::size_t request) const;

  friend bool operator==(const IntegralSolution&, const IntegralSolution&) = default;
};

struct FractionalSolution {
  Matrix<double> x;
  std::vector<double> y;
  double objective = 0;
};

enum class ConstraintKind : std::uint8_t {
  kRedundancy,  // served request with fewer than its required copies
  kAdmission,   // y above one
  kCpu,
  kRam,
  kUplink,
  kDownlink,
  kBinary,      // an entry outside {0,1}
};

std::string_view to_string(ConstraintKind k);
ConstraintKind constraint_for(Resource r) noexcept;

struct Violation {
  ConstraintKind kind;
  int index;        // MEC id for capacity rows, request id otherwise
  double overshoot; // amount by which the left-hand side exceeds its limit

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct SolutionMetrics {
  double total_reward = 0;
  int served_count = 0;
  std::vector<ResourceVector> loads;        // per MEC
  std::vector<ResourceVector> utilization;  // per MEC, load / capacity
  // Capacity-weighted mean over MECs: sum of loads over sum of capacities.
  ResourceVector aggregate_utilization{};
  // Requests that hold placements without being served.
  std::vector<int> wasted_placements;
  std::vector<Violation> violations;
  bool feasible = true;
};

// Objective and constraint check for an integral solution. Loads include
// every placement, served or not.
SolutionMetrics evaluate_solution(const ProblemInstance& inst, const IntegralSolution& sol);

// Per-MEC loads implied by a fractional solution.
std::vector<ResourceVector> fractional_loads(const ProblemInstance& inst,
                                             const FractionalSolution& frac);

// Relative slack used when comparing loads with capacities.
inline constexpr double kCapacityTolerance = 1e-9;

}  // namespace mecplace

#endif  // MECPLACE_MODEL_HPP
