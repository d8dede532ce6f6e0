#pragma once

#include <optional>

#include "streamlp/solution.hpp"

namespace streamlp {

// Brute-force reference optima at desk scale. Used only by tests and the
// cli verify mode; deliberately kept independent of the plugin solvers
// (subset enumeration and grid search, own linear algebra).

// Minimum enclosing ball by enumerating all defining subsets of size <= d+1.
Ball exact_meb(const std::vector<std::vector<double>>& points);

// Hard-margin optimum by enumerating support subsets (<= d+1 per class,
// <= d+2 total) with KKT solves. Infeasible when no separator exists.
Solution exact_svm(const std::vector<std::vector<double>>& positives,
                   const std::vector<std::vector<double>>& negatives);

// LP optimum by vertex enumeration over all d-subsets of rows (the box rows
// must be included by the caller). nullopt = infeasible.
std::optional<LpPoint> exact_lp(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& rhs,
                                const std::vector<double>& objective);

// 2x2 bounded SDP by dense grid search over unit-trace PSD matrices
// X = [[a, c], [c, 1-a]]. Maximizes <C,X> subject to <A_i,X> <= b_i, or the
// margin min_i(<A_i,X> - b_i) when maximize_margin is set.
// nullopt = no feasible grid point.
struct SdpGridOracle {
  double objective = 0.0;
  SdpMatrix x;
};
std::optional<SdpGridOracle> exact_sdp_grid(const std::vector<std::vector<double>>& a_dense,
                                            const std::vector<double>& b,
                                            const std::vector<double>& c_dense,
                                            bool maximize_margin = false,
                                            double grid_step = 5e-4);

}  // namespace streamlp
