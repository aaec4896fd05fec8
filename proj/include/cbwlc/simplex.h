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

// Dense two-phase tableau simplex for small linear programs
//
//   maximize c^T x  subject to  a_i^T x (<=, >=, =) b_i,  x >= 0,
//
// with Bland's rule for both entering and leaving variables.

#ifndef CBWLC_SIMPLEX_H_
#define CBWLC_SIMPLEX_H_

#include <vector>

namespace cbwlc {

enum class RowType { kLe, kGe, kEq };

struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowType> types;
  std::vector<double> rhs;

  explicit LpProblem(int n) : num_vars(n), objective(n, 0.0) {}
  void AddRow(std::vector<double> coeffs, RowType type, double b);
  int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kPivotLimit };

const char* LpStatusName(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  // One multiplier per row, y = c_B B^{-1}: nonnegative on binding <= rows,
  // nonpositive on >= rows, free on equalities.
  std::vector<double> duals;
  int pivots = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  int max_pivots = 10000;
};

LpResult SolveLp(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace cbwlc

#endif  // CBWLC_SIMPLEX_H_
