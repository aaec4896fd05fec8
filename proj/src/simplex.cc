// Copyright 2026 The CBwLC Authors.
//
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

#include "cbwlc/simplex.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbwlc {

void LpProblem::AddRow(std::vector<double> coeffs, RowType type, double b) {
  if (static_cast<int>(coeffs.size()) != num_vars) {
    throw std::invalid_argument("LP row has wrong length");
  }
  rows.push_back(std::move(coeffs));
  types.push_back(type);
  rhs.push_back(b);
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kPivotLimit:
      return "pivot_limit";
  }
  return "unknown";
}

namespace {

// Columns: structural variables, then one slack per inequality row, then one
// artificial per >= or = row. Every row owns an "identity column" whose
// entries started as the unit vector e_i; reading that column of the final
// tableau gives B^{-1} e_i.
class Tableau {
 public:
  Tableau(const LpProblem& p, const SimplexOptions& options)
      : m_(p.num_rows()), options_(options) {
    const int n = p.num_vars;
    flipped_.assign(m_, false);
    std::vector<RowType> types = p.types;
    for (int i = 0; i < m_; ++i) {
      if (p.rhs[i] < 0.0) {
        flipped_[i] = true;
        if (types[i] == RowType::kLe) {
          types[i] = RowType::kGe;
        } else if (types[i] == RowType::kGe) {
          types[i] = RowType::kLe;
        }
      }
    }
    int slacks = 0;
    int artificials = 0;
    for (RowType t : types) {
      if (t != RowType::kEq) ++slacks;
      if (t != RowType::kLe) ++artificials;
    }
    first_artificial_ = n + slacks;
    cols_ = n + slacks + artificials;
    a_.assign(static_cast<size_t>(m_) * cols_, 0.0);
    b_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    identity_col_.assign(m_, -1);
    int next_slack = n;
    int next_artificial = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      const double sign = flipped_[i] ? -1.0 : 1.0;
      for (int j = 0; j < n; ++j) at(i, j) = sign * p.rows[i][j];
      b_[i] = sign * p.rhs[i];
      if (types[i] == RowType::kLe) {
        at(i, next_slack) = 1.0;
        basis_[i] = identity_col_[i] = next_slack++;
      } else {
        if (types[i] == RowType::kGe) at(i, next_slack++) = -1.0;
        at(i, next_artificial) = 1.0;
        basis_[i] = identity_col_[i] = next_artificial++;
      }
    }
  }

  double& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  // Runs Bland's-rule iterations for objective `cost` (length cols_).
  // Returns kOptimal, kUnbounded or kPivotLimit.
  LpStatus Optimize(const std::vector<double>& cost, bool allow_artificials) {
    const double tol = options_.pivot_tolerance;
    while (true) {
      int enter = -1;
      const int limit = allow_artificials ? cols_ : first_artificial_;
      for (int j = 0; j < limit; ++j) {
        if (IsBasic(j)) continue;
        if (ReducedCost(cost, j) > tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double coef = at(i, enter);
        if (coef <= tol) continue;
        const double ratio = b_[i] / coef;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      if (pivots_ >= options_.max_pivots) return LpStatus::kPivotLimit;
      Pivot(leave, enter);
    }
  }

  // Pivots basic artificials out of the basis wherever a structural or
  // slack column has a usable entry in their row.
  void DriveOutArtificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (int j = 0; j < first_artificial_; ++j) {
        if (!IsBasic(j) && std::fabs(at(i, j)) > options_.pivot_tolerance) {
          Pivot(i, j);
          break;
        }
      }
    }
  }

  double Value(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += cost[basis_[i]] * b_[i];
    return v;
  }

  void Extract(const std::vector<double>& cost, int n, LpResult& out) const {
    out.x.assign(n, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n) out.x[basis_[i]] = b_[i];
    }
    out.duals.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double y = 0.0;
      for (int i = 0; i < m_; ++i) y += cost[basis_[i]] * at(i, identity_col_[r]);
      out.duals[r] = flipped_[r] ? -y : y;
    }
    out.pivots = pivots_;
  }

  int cols() const { return cols_; }
  int first_artificial() const { return first_artificial_; }

 private:
  bool IsBasic(int j) const {
    for (int b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  double ReducedCost(const std::vector<double>& cost, int j) const {
    double z = 0.0;
    for (int i = 0; i < m_; ++i) z += cost[basis_[i]] * at(i, j);
    return cost[j] - z;
  }

  void Pivot(int row, int col) {
    ++pivots_;
    const double p = at(row, col);
    for (int j = 0; j < cols_; ++j) at(row, j) /= p;
    b_[row] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j) at(i, j) -= f * at(row, j);
      b_[i] -= f * b_[row];
      if (std::fabs(b_[i]) < 1e-13) b_[i] = 0.0;
    }
    basis_[row] = col;
  }

  int m_;
  int cols_ = 0;
  int first_artificial_ = 0;
  SimplexOptions options_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<int> basis_;
  std::vector<int> identity_col_;
  std::vector<bool> flipped_;
  int pivots_ = 0;
};

}  // namespace

LpResult SolveLp(const LpProblem& problem, const SimplexOptions& options) {
  if (static_cast<int>(problem.objective.size()) != problem.num_vars) {
    throw std::invalid_argument("LP objective has wrong length");
  }
  Tableau tableau(problem, options);
  LpResult result;

  std::vector<double> phase1(tableau.cols(), 0.0);
  for (int j = tableau.first_artificial(); j < tableau.cols(); ++j) phase1[j] = -1.0;
  LpStatus status = tableau.Optimize(phase1, /*allow_artificials=*/true);
  if (status == LpStatus::kPivotLimit) {
    result.status = status;
    return result;
  }
  double scale = 1.0;
  for (double b : problem.rhs) scale = std::max(scale, std::fabs(b));
  if (tableau.Value(phase1) < -1e-9 * scale) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  tableau.DriveOutArtificials();

  std::vector<double> phase2(tableau.cols(), 0.0);
  for (int j = 0; j < problem.num_vars; ++j) phase2[j] = problem.objective[j];
  status = tableau.Optimize(phase2, /*allow_artificials=*/false);
  result.status = status;
  if (status != LpStatus::kOptimal) return result;
  result.objective = tableau.Value(phase2);
  tableau.Extract(phase2, problem.num_vars, result);
  return result;
}

}  // namespace cbwlc
