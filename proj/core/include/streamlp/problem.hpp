#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "streamlp/events.hpp"
#include "streamlp/solution.hpp"

namespace streamlp {

// An LP-type problem plugged into the solver. A plugin owns its snapping
// (event -> universe index) and the decoding back to the representative
// element its basis solver and violation predicate operate on.
//
// Contract (monotone/local solution function):
//   - violates(solve_basis(B), q) is false for every q in B;
//   - solve_basis is deterministic under a fixed input order (ties broken
//     by a documented total order per problem);
//   - violates is pure.
// All plugin operations are const and safe to call concurrently.
class LpTypeProblem {
 public:
  virtual ~LpTypeProblem() = default;

  virtual int nu() const = 0;      // combinatorial dimension
  virtual int lambda() const = 0;  // VC dimension
  virtual u128 universe_size() const = 0;

  // Maps an event to its snapped universe index. Throws DomainError when
  // the payload is outside the configured net.
  virtual u128 snap_event(const StreamEvent& ev) const = 0;

  // Exact f(B) on the decoded representatives of the given indices.
  virtual Solution solve_basis(std::span<const u128> basis) const = 0;

  // True iff f(B u {q}) > f(B) for the problem's solution order.
  virtual bool violates(const Solution& sol, u128 index) const = 0;

  // The post-hoc transform turning the snapped-instance optimum into a
  // guaranteed approximation for the original instance.
  virtual Solution correct_solution(const Solution& sol) const = 0;

  // Monte Carlo convention when the iteration budget runs out: SVM returns
  // Infeasible, everything else raises IterationBudgetError.
  virtual bool infeasible_on_budget() const { return false; }
};

// Implicit weight function over stored past solutions: a snapped point's
// weight is N^{v/s} where v counts stored solutions it violates. Nothing is
// ever stored per point; the exponent is recomputed on the fly in
// O(|stored|) time and O(1) space.
class WeightOracle {
 public:
  explicit WeightOracle(const LpTypeProblem& problem) : problem_(&problem) {}

  int weight_exponent(u128 index) const {
    int v = 0;
    for (const Solution& sol : stored_)
      if (problem_->violates(sol, index)) ++v;
    return v;
  }

  // Grows only on successful iterations.
  void record_success(const Solution& sol) { stored_.push_back(sol); }

  int stored_count() const { return static_cast<int>(stored_.size()); }
  const std::vector<Solution>& stored() const { return stored_; }
  const LpTypeProblem& problem() const { return *problem_; }

 private:
  const LpTypeProblem* problem_;
  std::vector<Solution> stored_;
};

}  // namespace streamlp
