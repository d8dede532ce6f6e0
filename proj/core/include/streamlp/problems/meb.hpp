#pragma once

#include <span>

#include "streamlp/net.hpp"
#include "streamlp/problem.hpp"

namespace streamlp {

// Exact minimum enclosing ball, move-to-front Welzl recursion with basis
// size <= d+1. Points are lexicographically sorted and deduplicated, then
// permuted by a fixed-seed shuffle, so the result is deterministic under
// any input order.
Ball welzl_meb(std::vector<std::vector<double>> points);

bool meb_violates(const Ball& ball, std::span<const double> q);
Ball meb_correct(const Ball& ball, double eps);

class MebProblem : public LpTypeProblem {
 public:
  // cfg must be a radial net; eps is the approximation target the
  // correction uses (usually cfg.eps).
  MebProblem(NetConfig cfg, double eps);

  int nu() const override { return cfg_.d + 1; }
  int lambda() const override { return cfg_.d + 1; }
  u128 universe_size() const override { return universe_; }
  u128 snap_event(const StreamEvent& ev) const override;
  Solution solve_basis(std::span<const u128> basis) const override;
  bool violates(const Solution& sol, u128 index) const override;
  Solution correct_solution(const Solution& sol) const override;

  std::vector<double> decode(u128 index) const;
  const NetConfig& net() const { return cfg_; }

 private:
  NetConfig cfg_;
  double eps_;
  u128 universe_;
};

}  // namespace streamlp
