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

#include "mecplace/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "mecplace/errors.hpp"

namespace mecplace {

std::size_t LinearProgram::add_variable(double cost, double lo, double hi, std::string name) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(name.empty() ? fmt::format("v{}", objective.size() - 1) : std::move(name));
  return objective.size() - 1;
}

void LinearProgram::add_row(std::vector<Term> terms, RowSense sense, double rhs, std::string name) {
  if (name.empty()) name = fmt::format("r{}", rows.size());
  rows.push_back({std::move(terms), sense, rhs, std::move(name)});
}

void LinearProgram::validate() const {
  const std::size_t n = variable_count();
  if (lower.size() != n || upper.size() != n) {
    throw InvalidModelError("bound vectors do not match the variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw InvalidModelError("non-finite objective coefficient");
    if (!std::isfinite(lower[j])) throw InvalidModelError("lower bounds must be finite");
    if (std::isnan(upper[j]) || upper[j] < lower[j]) {
      throw InvalidModelError(fmt::format("variable {} has inverted bounds", j));
    }
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) throw InvalidModelError(fmt::format("row {} has non-finite rhs", row.name));
    for (const auto& t : row.terms) {
      if (t.variable >= n) {
        throw InvalidModelError(fmt::format("row {} references variable {}", row.name, t.variable));
      }
      if (!std::isfinite(t.coefficient)) {
        throw InvalidModelError(fmt::format("row {} has a non-finite coefficient", row.name));
      }
    }
  }
}

double LinearProgram::evaluate_objective(std::span<const double> values) const {
  double z = 0;
  for (std::size_t j = 0; j < objective.size(); ++j) z += objective[j] * values[j];
  return z;
}

double LinearProgram::max_violation(std::span<const double> values) const {
  double worst = 0;
  for (std::size_t j = 0; j < variable_count(); ++j) {
    worst = std::max({worst, lower[j] - values[j], values[j] - upper[j]});
  }
  for (const auto& row : rows) {
    double lhs = 0;
    for (const auto& t : row.terms) lhs += t.coefficient * values[t.variable];
    switch (row.sense) {
      case RowSense::kLessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

// Dense tableau holding B^-1 [A | I_slack | I_art] and B^-1 b. Columns are
// structural variables, then one slack per row, then artificials.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {
    m_ = lp.rows.size();
    n_ = lp.variable_count();
    setup();
  }

  LpResult run() {
    if (art_count_ > 0) {
      std::vector<double> phase1(cols_, 0.0);
      for (std::size_t j = art_begin_; j < cols_; ++j) phase1[j] = -1.0;
      optimize(phase1);
      refresh_values();
      double infeasibility = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] >= art_begin_) infeasibility += std::abs(xb_[i]);
      }
      if (infeasibility > opt_.tolerance * scale_) {
        throw InfeasibleProgramError(
            fmt::format("program is infeasible (residual {:.3g})", infeasibility));
      }
      drive_out_artificials();
    }
    std::vector<double> phase2(cols_, 0.0);
    std::copy(lp_.objective.begin(), lp_.objective.end(), phase2.begin());
    optimize(phase2);
    return extract(phase2);
  }

 private:
  double& at(std::size_t i, std::size_t j) { return tab_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return tab_[i * cols_ + j]; }

  double value_of_nonbasic(std::size_t j) const { return at_upper_[j] ? up_[j] : lo_[j]; }

  void setup() {
    // Slack s_i with coefficient +1 (<=, =) or -1 (>=); = rows fix it at 0.
    std::vector<double> slack_coef(m_), slack_hi(m_), residual(m_);
    std::vector<char> needs_art(m_, 0);
    scale_ = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp_.rows[i];
      slack_coef[i] = row.sense == RowSense::kGreaterEqual ? -1.0 : 1.0;
      slack_hi[i] = row.sense == RowSense::kEqual ? 0.0 : kInfinity;
      double r = row.rhs;
      for (const auto& t : row.terms) r -= t.coefficient * lp_.lower[t.variable];
      residual[i] = r;
      scale_ = std::max(scale_, std::abs(row.rhs));
      const double s = r / slack_coef[i];
      needs_art[i] = !(s >= 0.0 && s <= slack_hi[i]);
      art_count_ += needs_art[i];
    }
    art_begin_ = n_ + m_;
    cols_ = art_begin_ + art_count_;
    tab_.assign(m_ * cols_, 0.0);
    beta_.assign(m_, 0.0);
    lo_.assign(cols_, 0.0);
    up_.assign(cols_, kInfinity);
    at_upper_.assign(cols_, 0);
    basis_.assign(m_, 0);
    xb_.assign(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lp_.lower[j];
      up_[j] = lp_.upper[j];
    }
    std::size_t next_art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& t : lp_.rows[i].terms) at(i, t.variable) += t.coefficient;
      at(i, n_ + i) = slack_coef[i];
      up_[n_ + i] = slack_hi[i];
      beta_[i] = lp_.rows[i].rhs;
      std::size_t basic;
      double sign;
      if (!needs_art[i]) {
        basic = n_ + i;
        sign = slack_coef[i];
      } else {
        basic = next_art++;
        sign = residual[i] >= 0 ? 1.0 : -1.0;
        at(i, basic) = sign;
      }
      // Normalize so the basic column is +1.
      if (sign < 0) {
        for (std::size_t j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
        beta_[i] = -beta_[i];
      }
      basis_[i] = basic;
    }
    refresh_values();
    max_iterations_ = opt_.max_iterations != 0 ? opt_.max_iterations : 50 * (m_ + cols_) + 1000;
  }

  // x_B = B^-1 b - sum over nonbasic j of (B^-1 A)_j x_j
  void refresh_values() {
    std::vector<char> basic(cols_, 0);
    for (std::size_t b : basis_) basic[b] = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      double v = beta_[i];
      const double* row = &tab_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (basic[j] || row[j] == 0.0) continue;
        v -= row[j] * value_of_nonbasic(j);
      }
      xb_[i] = v;
    }
  }

  void refresh_costs(const std::vector<double>& cost) {
    d_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &tab_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    for (std::size_t b : basis_) d_[b] = 0.0;
  }

  void pivot(std::size_t r, std::size_t q) {
    const double piv = at(r, q);
    if (!(std::abs(piv) >= opt_.pivot_floor)) {
      throw NumericalError(fmt::format("pivot magnitude {:.3g} below floor", std::abs(piv)));
    }
    double* prow = &tab_[r * cols_];
    const double inv = 1.0 / piv;
    nz_.clear();
    for (std::size_t j = 0; j < cols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nz_.push_back(j);
      }
    }
    prow[q] = 1.0;
    beta_[r] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[q] = 0.0;
      beta_[i] -= f * beta_[r];
    }
    const double fd = d_[q];
    if (fd != 0.0) {
      for (std::size_t j : nz_) d_[j] -= fd * prow[j];
      d_[q] = 0.0;
    }
    basis_[r] = q;
  }

  // Entering column or cols_ when optimal.
  std::size_t price(bool bland) const {
    std::size_t best = cols_;
    double best_score = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (up_[j] - lo_[j] <= 0.0 || in_basis_[j]) continue;
      const double dj = d_[j];
      double score = 0.0;
      if (!at_upper_[j] && dj > opt_.tolerance) score = dj;
      else if (at_upper_[j] && dj < -opt_.tolerance) score = -dj;
      else continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  void optimize(const std::vector<double>& cost) {
    refresh_costs(cost);
    in_basis_.assign(cols_, 0);
    for (std::size_t b : basis_) in_basis_[b] = 1;
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::size_t since_refresh = 0;
    for (;;) {
      if (iterations_ >= max_iterations_) {
        throw IterationLimitError(fmt::format("simplex hit {} iterations", max_iterations_));
      }
      if (since_refresh >= opt_.refresh_interval) {
        refresh_values();
        refresh_costs(cost);
        since_refresh = 0;
      }
      const std::size_t q = price(bland);
      if (q == cols_) break;
      const double dir = at_upper_[q] ? -1.0 : 1.0;

      // Ratio test; the entering variable's own range is the bound-flip step.
      double step = up_[q] - lo_[q];
      std::size_t leave = m_;
      double leave_alpha = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, q);
        if (std::abs(a) <= opt_.pivot_floor) continue;
        const double g = dir * a;
        const std::size_t b = basis_[i];
        double ratio;
        if (g > 0) {
          ratio = (xb_[i] - lo_[b]) / g;
        } else {
          if (!std::isfinite(up_[b])) continue;
          ratio = (up_[b] - xb_[i]) / -g;
        }
        ratio = std::max(ratio, 0.0);
        const double tie = 1e-12 * (1.0 + std::abs(ratio));
        if (ratio < step - tie) {
          step = ratio;
          leave = i;
          leave_alpha = a;
        } else if (leave != m_ && std::abs(ratio - step) <= tie) {
          const bool better = bland ? basis_[i] < basis_[leave] : std::abs(a) > std::abs(leave_alpha);
          if (better) {
            step = std::min(step, ratio);
            leave = i;
            leave_alpha = a;
          }
        }
      }
      if (leave == m_ && !std::isfinite(step)) {
        throw UnboundedProgramError("objective is unbounded");
      }

      if (step > 0.0) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, q);
          if (a != 0.0) xb_[i] -= step * dir * a;
        }
      }
      if (leave == m_) {
        at_upper_[q] = !at_upper_[q];
      } else {
        const std::size_t b = basis_[leave];
        const double entering_value = value_of_nonbasic(q) + dir * step;
        at_upper_[b] = (dir * leave_alpha) < 0 ? 1 : 0;
        at_upper_[q] = 0;
        in_basis_[b] = 0;
        in_basis_[q] = 1;
        pivot(leave, q);
        xb_[leave] = entering_value;
      }
      ++iterations_;
      ++since_refresh;

      if (step <= opt_.tolerance) {
        if (++degenerate_run > opt_.degeneracy_threshold) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      std::size_t best = cols_;
      double best_mag = opt_.pivot_floor;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (in_basis_[j]) continue;
        const double mag = std::abs(at(i, j));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best == cols_) continue;  // redundant row; the artificial stays basic at zero
      const std::size_t art = basis_[i];
      const double v = value_of_nonbasic(best);
      in_basis_[art] = 0;
      in_basis_[best] = 1;
      at_upper_[art] = 0;
      // Phase-two costs are recomputed from scratch, so d_ need not be valid here.
      d_.assign(cols_, 0.0);
      pivot(i, best);
      xb_[i] = v;
    }
    for (std::size_t j = art_begin_; j < cols_; ++j) up_[j] = 0.0;
    refresh_values();
  }

  LpResult extract(const std::vector<double>& cost) {
    refresh_values();
    refresh_costs(cost);
    LpResult res;
    res.values.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (!in_basis_[j]) res.values[j] = value_of_nonbasic(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) res.values[basis_[i]] = xb_[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      // Snap round-off back inside the box.
      if (res.values[j] < lo_[j] && res.values[j] > lo_[j] - opt_.tolerance) res.values[j] = lo_[j];
      if (res.values[j] > up_[j] && res.values[j] < up_[j] + opt_.tolerance) res.values[j] = up_[j];
    }
    const double viol = lp_.max_violation(res.values);
    if (viol > opt_.tolerance * scale_) {
      throw NumericalError(fmt::format("solution violates the program by {:.3g}", viol));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (in_basis_[j] || up_[j] - lo_[j] <= 0.0) continue;
      const bool bad = at_upper_[j] ? d_[j] < -opt_.tolerance : d_[j] > opt_.tolerance;
      if (bad) throw NumericalError("reduced costs do not certify optimality");
    }
    res.reduced_costs.assign(d_.begin(), d_.begin() + static_cast<std::ptrdiff_t>(n_));
    res.objective = lp_.evaluate_objective(res.values);
    res.iterations = iterations_;
    return res;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t m_ = 0, n_ = 0, cols_ = 0, art_begin_ = 0, art_count_ = 0;
  std::size_t iterations_ = 0, max_iterations_ = 0;
  double scale_ = 1.0;
  std::vector<double> tab_, beta_, lo_, up_, xb_, d_;
  std::vector<char> at_upper_, in_basis_;
  std::vector<std::size_t> basis_, nz_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  if (!(options.tolerance > 0) || !(options.pivot_floor > 0)) {
    throw DomainError("simplex tolerances must be positive");
  }
  return Simplex(lp, options).run();
}

LinearProgram build_relaxed_program(const ProblemInstance& inst,
                                    std::span<const std::size_t> requests,
                                    std::span<const ResourceVector> capacities) {
  const std::size_t R = requests.size();
  const std::size_t M = capacities.size();
  LinearProgram lp;
  lp.objective.reserve(R * M + R);
  for (std::size_t k = 0; k < R; ++k) {
    const int rid = inst.requests[requests[k]].id;
    for (std::size_t m = 0; m < M; ++m) {
      lp.add_variable(0.0, 0.0, 1.0, fmt::format("x_{}_{}", rid, m));
    }
  }
  for (std::size_t k = 0; k < R; ++k) {
    const auto& req = inst.requests[requests[k]];
    lp.add_variable(req.reward, 0.0, 1.0, fmt::format("y_{}", req.id));
  }
  for (std::size_t k = 0; k < R; ++k) {
    std::vector<Term> terms;
    terms.reserve(M + 1);
    for (std::size_t m = 0; m < M; ++m) terms.push_back({1.0, k * M + m});
    terms.push_back({-static_cast<double>(inst.replicas[requests[k]]), R * M + k});
    lp.add_row(std::move(terms), RowSense::kGreaterEqual, 0.0,
               fmt::format("redundancy_{}", inst.requests[requests[k]].id));
  }
  for (std::size_t k = 0; k < R; ++k) {
    lp.add_row({{1.0, R * M + k}}, RowSense::kLessEqual, 1.0,
               fmt::format("admission_{}", inst.requests[requests[k]].id));
  }
  for (std::size_t m = 0; m < M; ++m) {
    for (Resource res : kAllResources) {
      std::vector<Term> terms;
      terms.reserve(R);
      for (std::size_t k = 0; k < R; ++k) {
        terms.push_back({inst.requests[requests[k]].demand(res), k * M + m});
      }
      lp.add_row(std::move(terms), RowSense::kLessEqual, capacities[m][index_of(res)],
                 fmt::format("{}_{}", to_string(res), m));
    }
  }
  return lp;
}

LinearProgram build_relaxed_program(const ProblemInstance& inst) {
  std::vector<std::size_t> all(inst.request_count());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
  std::vector<ResourceVector> caps;
  caps.reserve(inst.mec_count());
  for (const auto& m : inst.mecs) caps.push_back(m.capacities());
  return build_relaxed_program(inst, all, caps);
}

FractionalSolution to_fractional(const ProblemInstance& inst, const LpResult& result) {
  const std::size_t R = inst.request_count();
  const std::size_t M = inst.mec_count();
  if (result.values.size() != R * M + R) {
    throw DimensionMismatchError("LP result does not match the instance");
  }
  FractionalSolution frac{Matrix<double>(R, M, 0.0), std::vector<double>(R, 0.0), result.objective};
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t m = 0; m < M; ++m) frac.x(r, m) = clamp01(result.values[r * M + m]);
    frac.y[r] = clamp01(result.values[R * M + r]);
  }
  return frac;
}

FractionalSolution solve_relaxation(const ProblemInstance& inst, const SimplexOptions& options) {
  return to_fractional(inst, solve_lp(build_relaxed_program(inst), options));
}

namespace {

void write_linear(std::ostream& out, const std::vector<Term>& terms, const LinearProgram& lp) {
  if (terms.empty()) {
    out << " 0 " << lp.names.front();
    return;
  }
  bool first = true;
  for (const auto& t : terms) {
    const double c = t.coefficient;
    out << (c < 0 ? " - " : (first ? " " : " + ")) << fmt::format("{}", std::abs(c)) << ' '
        << lp.names[t.variable];
    first = false;
  }
}

}  // namespace

void write_lp_format(std::ostream& out, const LinearProgram& lp) {
  out << "\\ relaxed placement program\nMaximize\n obj:";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < lp.variable_count(); ++j) {
    if (lp.objective[j] != 0.0) obj.push_back({lp.objective[j], j});
  }
  if (lp.variable_count() > 0) write_linear(out, obj, lp);
  out << "\nSubject To\n";
  for (const auto& row : lp.rows) {
    if (lp.variable_count() == 0) continue;
    out << ' ' << row.name << ':';
    write_linear(out, row.terms, lp);
    const char* op = row.sense == RowSense::kLessEqual ? "<=" : row.sense == RowSense::kGreaterEqual ? ">=" : "=";
    out << ' ' << op << ' ' << fmt::format("{}", row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.variable_count(); ++j) {
    out << ' ' << fmt::format("{}", lp.lower[j]) << " <= " << lp.names[j] << " <= "
        << (std::isfinite(lp.upper[j]) ? fmt::format("{}", lp.upper[j]) : std::string("+inf"))
        << '\n';
  }
  out << "End\n";
}

}  // namespace mecplace
