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

#ifndef MECPLACE_LP_HPP
#define MECPLACE_LP_HPP

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mecplace/model.hpp"

namespace mecplace {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  double coefficient;
  std::size_t variable;
};

struct Row {
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0;
  std::string name;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Maximization program over bounded variables: lower bounds must be finite,
// upper bounds may be infinite. Rows are sparse.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<Row> rows;

  std::size_t variable_count() const noexcept { return objective.size(); }

  std::size_t add_variable(double cost, double lo = 0.0, double hi = 1.0, std::string name = {});
  void add_row(std::vector<Term> terms, RowSense sense, double rhs, std::string name = {});

  // Throws InvalidModelError on out-of-range variables, non-finite data or
  // inverted bounds.
  void validate() const;

  double evaluate_objective(std::span<const double> values) const;
  // Largest amount by which `values` breaks a row or a bound.
  double max_violation(std::span<const double> values) const;
};

struct SimplexOptions {
  double tolerance = 1e-7;     // primal feasibility and reduced-cost optimality
  double pivot_floor = 1e-10;  // smallest usable pivot magnitude
  std::size_t max_iterations = 0;       // 0: derived from the problem size
  std::size_t degeneracy_threshold = 50;  // consecutive degenerate pivots before Bland's rule
  std::size_t refresh_interval = 100;     // recompute basic values and costs every N pivots
};

struct LpResult {
  std::vector<double> values;
  double objective = 0;
  std::size_t iterations = 0;
  // Reduced costs at the optimum, structural variables only. For a maximum,
  // variables at their lower bound have d <= tol and at their upper bound
  // d >= -tol.
  std::vector<double> reduced_costs;
};

// Two-phase bounded-variable primal simplex on a dense tableau. Largest
// reduced cost pricing, switching to Bland's rule while the method stalls on
// degenerate pivots. Throws InfeasibleProgramError, UnboundedProgramError,
// IterationLimitError or NumericalError.
LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

// Relaxed placement program. Variable r*M+m is x[r][m] and R*M+r is y[r].
// Row order: one redundancy row per request, one admission row per request,
// then cpu, ram, uplink, downlink rows for each MEC.
LinearProgram build_relaxed_program(const ProblemInstance& inst);

// The same program restricted to `requests` against explicit per-MEC
// capacities (which may be zero). Variables are numbered by position in
// `requests`. Used for residual bounds in branch and bound.
LinearProgram build_relaxed_program(const ProblemInstance& inst,
                                    std::span<const std::size_t> requests,
                                    std::span<const ResourceVector> capacities);

FractionalSolution to_fractional(const ProblemInstance& inst, const LpResult& result);

// build_relaxed_program + solve_lp + to_fractional.
FractionalSolution solve_relaxation(const ProblemInstance& inst,
                                    const SimplexOptions& options = {});

// CPLEX-style LP text for inspection with external solvers.
void write_lp_format(std::ostream& out, const LinearProgram& lp);

}  // namespace mecplace

#endif  // MECPLACE_LP_HPP
