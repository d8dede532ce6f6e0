#pragma once

#include <span>

#include "streamlp/net.hpp"
#include "streamlp/problem.hpp"

namespace streamlp {

// a.x > b within an absolute guard.
bool lp_violates(std::span<const double> a, double b, std::span<const double> x);

// Bounded LP: maximize c.x over stream constraints a_i.x <= b_i with
// |a_ij|, |b_i| <= 1 declared, plus |x_j| <= x_bound box rows appended to
// every basis solve. Constraint rows (a, b) snap onto a non-radial net over
// d+1 dimensions with accuracy eps.
//
// The classification reduction reuses this plugin: stream elements are
// labeled feature vectors, negated to x' so every constraint reads
// x'.u + sigma <= 0, and a margin variable sigma is appended with
// objective max sigma.
class BoundedLpProblem : public LpTypeProblem {
 public:
  BoundedLpProblem(int d, double eps, std::vector<double> objective, double x_bound = 1.0);

  int nu() const override { return var_dim_; }
  int lambda() const override { return var_dim_ + 1; }
  u128 universe_size() const override { return universe_; }
  u128 snap_event(const StreamEvent& ev) const override;
  Solution solve_basis(std::span<const u128> basis) const override;
  bool violates(const Solution& sol, u128 index) const override;
  Solution correct_solution(const Solution& sol) const override;  // identity

  // Decoded constraint over the full variable vector: (row, rhs).
  std::pair<std::vector<double>, double> decode(u128 index) const;
  const NetConfig& net() const { return cfg_; }
  bool has_margin() const { return margin_; }
  const std::vector<double>& objective() const { return objective_; }
  double x_bound() const { return x_bound_; }

 private:
  friend BoundedLpProblem classification_to_lp(int d, double eps);
  BoundedLpProblem() = default;

  int data_dim_ = 0;  // snapped dims: d+1 plain, d classification
  int var_dim_ = 0;   // d plain, d+1 with the margin variable
  bool margin_ = false;
  std::vector<double> objective_;
  double x_bound_ = 1.0;
  NetConfig cfg_;
  u128 universe_ = 0;
};

// Labeled points {-1,+1} become one-sided constraints x'.u + sigma <= 0 by
// negating the +1 class; the objective maximizes the separation sigma. A
// returned margin above the snapping slack certifies a true separator.
BoundedLpProblem classification_to_lp(int d, double eps);

}  // namespace streamlp
