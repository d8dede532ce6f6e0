#include "streamlp/problems/lp.hpp"

#include <cmath>

#include "streamlp/simplex.hpp"

namespace streamlp {

bool lp_violates(std::span<const double> a, double b, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s > b + 1e-12;
}

BoundedLpProblem::BoundedLpProblem(int d, double eps, std::vector<double> objective,
                                   double x_bound)
    : data_dim_(d + 1), var_dim_(d), objective_(std::move(objective)), x_bound_(x_bound) {
  if (static_cast<int>(objective_.size()) != d)
    throw UsageError("lp: objective dimension mismatch");
  if (!(x_bound > 0.0)) throw UsageError("lp: x_bound must be positive");
  cfg_.d = data_dim_;
  cfg_.eps = eps;
  cfg_.radial = false;
  cfg_.validate();
  universe_ = net_size(cfg_);
}

BoundedLpProblem classification_to_lp(int d, double eps) {
  BoundedLpProblem p;
  p.data_dim_ = d;
  p.var_dim_ = d + 1;
  p.margin_ = true;
  p.objective_.assign(d + 1, 0.0);
  p.objective_[d] = 1.0;  // maximize the separation variable
  p.x_bound_ = 1.0;
  p.cfg_.d = d;
  p.cfg_.eps = eps;
  p.cfg_.radial = false;
  p.cfg_.validate();
  p.universe_ = net_size(p.cfg_);
  return p;
}

u128 BoundedLpProblem::snap_event(const StreamEvent& ev) const {
  const PointRecord& rec = ev.point();
  std::vector<double> row = rec.coords;
  if (margin_) {
    if (rec.label != 1 && rec.label != -1)
      throw UsageError("classification: event without a +-1 label");
    if (static_cast<int>(row.size()) != data_dim_)
      throw InputBoundsError("classification: feature dimension mismatch");
    if (rec.label == 1)
      for (double& v : row) v = -v;
  } else {
    if (rec.label != 0) throw UsageError("lp: unexpected label on a constraint row");
    if (static_cast<int>(row.size()) != data_dim_)
      throw InputBoundsError("lp: constraint row must carry d+1 numbers");
  }
  for (double v : row)
    if (std::abs(v) > 1.0 + 1e-9)
      throw InputBoundsError("lp: coefficient outside the declared [-1,1] bound");
  return flat_index(snap(row, cfg_), cfg_);
}

std::pair<std::vector<double>, double> BoundedLpProblem::decode(u128 index) const {
  const std::vector<double> rep = unsnap(from_flat(index, cfg_), cfg_);
  if (!margin_) {
    std::vector<double> a(rep.begin(), rep.end() - 1);
    return {std::move(a), rep.back()};
  }
  // x'.u + sigma <= 0
  std::vector<double> a = rep;
  a.push_back(1.0);
  return {std::move(a), 0.0};
}

Solution BoundedLpProblem::solve_basis(std::span<const u128> basis) const {
  if (basis.empty()) throw EmptyInputError("lp: empty basis");
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  rows.reserve(basis.size() + 2 * var_dim_);
  for (u128 idx : basis) {
    auto [a, b] = decode(idx);
    rows.push_back(std::move(a));
    rhs.push_back(b);
  }
  // solution-norm box; the margin variable gets a wide enough box of its own
  for (int j = 0; j < var_dim_; ++j) {
    const double bound =
        (margin_ && j == var_dim_ - 1) ? 1.0 + std::sqrt(double(data_dim_)) : x_bound_;
    std::vector<double> up(var_dim_, 0.0), dn(var_dim_, 0.0);
    up[j] = 1.0;
    dn[j] = -1.0;
    rows.push_back(up);
    rhs.push_back(bound);
    rows.push_back(dn);
    rhs.push_back(bound);
  }
  const ExactLpResult res = solve_bounded_lp(rows, rhs, objective_);
  if (res.status == ExactLpResult::Status::Infeasible) return Infeasible{};
  return LpPoint{res.x};
}

bool BoundedLpProblem::violates(const Solution& sol, u128 index) const {
  if (std::holds_alternative<Infeasible>(sol)) return false;
  const auto& p = std::get<LpPoint>(sol);
  auto [a, b] = decode(index);
  return lp_violates(a, b, p.x);
}

Solution BoundedLpProblem::correct_solution(const Solution& sol) const { return sol; }

}  // namespace streamlp
