#pragma once

#include <vector>

#include "streamlp/common.hpp"

namespace streamlp {

// Exact LP solver: maximize c.x subject to rows[i].x <= rhs[i], x free.
// Pivoting is exact rational (GMP), Bland's rule, so the result is
// deterministic and ties are broken toward the lexicographically smallest
// optimal point.
//
// The row set must contain the +-e_j box rows for every variable (callers
// append solution-norm boxes anyway); they seed the initial basis, so no
// phase-I is needed and the problem is never unbounded.
struct ExactLpResult {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

ExactLpResult solve_bounded_lp(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& rhs,
                               const std::vector<double>& objective);

}  // namespace streamlp
