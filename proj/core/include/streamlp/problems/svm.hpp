#pragma once

#include <span>

#include "streamlp/net.hpp"
#include "streamlp/problem.hpp"

namespace streamlp {

// Exact hard-margin separator: min |u|^2 subject to y_i(u.z_i - b) >= 1.
// Solved as the closest pair of the two class hulls (min-norm point of the
// difference polytope, Wolfe-style active set over an implicit vertex set).
// Returns Infeasible when the hulls touch or intersect.
Solution svm_solve_exact(const std::vector<std::vector<double>>& positives,
                         const std::vector<std::vector<double>>& negatives);

bool svm_violates(const Hyperplane& h, std::span<const double> z, int label);
Hyperplane svm_correct(const Hyperplane& h, double eps);

class SvmProblem : public LpTypeProblem {
 public:
  // Points live in the fixed-precision unit cube; the net accuracy is
  // eps*gamma/2 so snapping keeps gamma-separable inputs gamma/2-separable.
  SvmProblem(int d, double eps, double gamma);

  int nu() const override { return d_ + 2; }  // inseparable-set basis size
  int lambda() const override { return d_ + 1; }
  u128 universe_size() const override { return 2 * net_universe_; }
  u128 snap_event(const StreamEvent& ev) const override;
  Solution solve_basis(std::span<const u128> basis) const override;
  bool violates(const Solution& sol, u128 index) const override;
  Solution correct_solution(const Solution& sol) const override;
  bool infeasible_on_budget() const override { return true; }

  std::pair<std::vector<double>, int> decode(u128 index) const;  // (z, label)
  const NetConfig& net() const { return cfg_; }
  double gamma() const { return gamma_; }

 private:
  int d_;
  double eps_;
  double gamma_;
  NetConfig cfg_;
  u128 net_universe_;
};

}  // namespace streamlp
