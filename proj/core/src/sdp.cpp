#include "streamlp/problems/sdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "streamlp/simplex.hpp"

namespace streamlp {

namespace {

u128 binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  u128 r = 1;
  for (int i = 1; i <= k; ++i) r = checked_mul(r, u128(n - k + i)) / u128(i);
  return r;
}

int snap_step(double v, double step, int span) {
  const long long k = static_cast<long long>(std::ceil(v / step - 0.5));
  return static_cast<int>(std::clamp(k, -static_cast<long long>(span),
                                     static_cast<long long>(span)));
}

Eigen::MatrixXd to_matrix(const SdpMatrix& x) {
  Eigen::MatrixXd m(x.d, x.d);
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) m(i, j) = x.at(i, j);
  return m;
}

}  // namespace

std::optional<std::vector<double>> sdp_psd_violator(const SdpMatrix& x, double eps) {
  const Eigen::MatrixXd m = to_matrix(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  if (eig.eigenvalues()(0) >= 0.0) return std::nullopt;
  const Eigen::VectorXd v = eig.eigenvectors().col(0);
  const double step = eps / (x.d * std::sqrt(double(x.d)));
  const int span = static_cast<int>(std::ceil(1.0 / step));
  std::vector<double> z(x.d);
  for (int i = 0; i < x.d; ++i) z[i] = snap_step(v(i), step, span) * step;
  return z;
}

SdpMatrix sdp_correct(const SdpMatrix& x, double eps) {
  SdpMatrix out = x;
  const double shift = 3.0 * eps / x.d;
  for (int i = 0; i < x.d; ++i) out.at(i, i) += shift;
  const double scale = 1.0 / (1.0 + 3.0 * eps);
  for (double& e : out.entries) e *= scale;
  return out;
}

BoundedSdpProblem::BoundedSdpProblem(int d, double eps, int sparsity, double frobenius,
                                     std::vector<SdpEntry> objective, bool margin)
    : d_(d),
      var_dim_(d * d + (margin ? 1 : 0)),
      eps_(eps),
      sparsity_(sparsity),
      frobenius_(frobenius),
      margin_(margin) {
  if (d < 1 || d > 8) throw UsageError("sdp: dimension must be in [1, 8]");
  if (sparsity < 1 || sparsity > d * d) throw UsageError("sdp: sparsity S out of range");
  if (!(eps > 0.0 && eps <= 1.0)) throw UsageError("sdp: eps must be in (0, 1]");

  objective_dense_.assign(d * d, 0.0);
  for (const SdpEntry& e : objective) {
    if (e.row < 0 || e.row >= d || e.col < 0 || e.col >= d)
      throw UsageError("sdp: objective entry out of range");
    objective_dense_[e.row * d + e.col] += e.value;
  }
  double fro = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (std::abs(objective_dense_[i * d + j] - objective_dense_[j * d + i]) > 1e-9)
        throw InputBoundsError("sdp: objective matrix must be symmetric");
      fro += objective_dense_[i * d + j] * objective_dense_[i * d + j];
    }
  if (!margin_ && std::sqrt(fro) > 1.0 + 1e-9)
    throw InputBoundsError("sdp: objective Frobenius norm exceeds 1");

  value_step_ = eps / std::min(d, sparsity);
  value_span_ = static_cast<int>(std::ceil(1.0 / value_step_));
  rhs_step_ = eps;
  rhs_span_ = static_cast<int>(std::ceil(1.0 / rhs_step_));

  const u128 patterns = binom(d * d, sparsity);
  u128 n = patterns;
  for (int i = 0; i < sparsity; ++i) n = checked_mul(n, u128(2 * value_span_ + 1));
  n = checked_mul(n, u128(2 * rhs_span_ + 1));
  universe_ = n;
}

BoundedSdpProblem saddle_to_sdp(int d, double eps, int sparsity, double frobenius) {
  return BoundedSdpProblem(d, eps, sparsity, frobenius, {}, true);
}

u128 BoundedSdpProblem::encode_pattern(const std::vector<int>& positions) const {
  u128 rank = 0;
  for (int i = 0; i < sparsity_; ++i) rank += binom(positions[i], i + 1);
  return rank;
}

std::vector<int> BoundedSdpProblem::decode_pattern(u128 rank) const {
  std::vector<int> out(sparsity_);
  for (int i = sparsity_ - 1; i >= 0; --i) {
    int p = i;  // smallest position with binom(p, i+1) defined
    while (binom(p + 1, i + 1) <= rank) ++p;
    out[i] = p;
    rank -= binom(p, i + 1);
  }
  return out;
}

u128 BoundedSdpProblem::snap_event(const StreamEvent& ev) const {
  const SdpConstraint& row = ev.sdp();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d_, d_);
  for (const SdpEntry& e : row.entries) {
    if (e.row < 0 || e.row >= d_ || e.col < 0 || e.col >= d_)
      throw InputBoundsError("sdp: constraint entry position out of range");
    a(e.row, e.col) += e.value;
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw InputBoundsError("sdp: constraint matrix must be symmetric");
  int nnz = 0;
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if (a(i, j) != 0.0) ++nnz;
  if (nnz > sparsity_)
    throw InputBoundsError("sdp: constraint has more than S nonzero entries");
  if (a.norm() > frobenius_ + 1e-9)
    throw InputBoundsError("sdp: constraint Frobenius norm exceeds F");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + 1e-9)
    throw InputBoundsError("sdp: constraint spectral norm exceeds 1");
  if (std::abs(row.rhs) > 1.0 + 1e-9)
    throw InputBoundsError("sdp: right-hand side outside [-1, 1]");

  // Lexicographically first S-subset covering the nonzero positions: the
  // nonzeros padded with the smallest free positions.
  std::vector<int> positions;
  for (int p = 0; p < d_ * d_; ++p)
    if (a(p / d_, p % d_) != 0.0) positions.push_back(p);
  for (int p = 0; p < d_ * d_ && static_cast<int>(positions.size()) < sparsity_; ++p)
    if (a(p / d_, p % d_) == 0.0) positions.push_back(p);
  std::sort(positions.begin(), positions.end());

  u128 idx = encode_pattern(positions);
  for (int i = 0; i < sparsity_; ++i) {
    const int digit = snap_step(a(positions[i] / d_, positions[i] % d_), value_step_,
                                value_span_) + value_span_;
    idx = idx * u128(2 * value_span_ + 1) + u128(digit);
  }
  idx = idx * u128(2 * rhs_span_ + 1) +
        u128(snap_step(row.rhs, rhs_step_, rhs_span_) + rhs_span_);
  return idx;
}

std::pair<std::vector<double>, double> BoundedSdpProblem::decode(u128 index) const {
  const u128 rhs_digits = 2 * rhs_span_ + 1;
  const int rhs_digit = static_cast<int>(index % rhs_digits);
  index /= rhs_digits;
  std::vector<int> value_digits(sparsity_);
  const u128 value_digits_n = 2 * value_span_ + 1;
  for (int i = sparsity_ - 1; i >= 0; --i) {
    value_digits[i] = static_cast<int>(index % value_digits_n);
    index /= value_digits_n;
  }
  const std::vector<int> positions = decode_pattern(index);
  std::vector<double> a(d_ * d_, 0.0);
  for (int i = 0; i < sparsity_; ++i)
    a[positions[i]] = (value_digits[i] - value_span_) * value_step_;
  return {std::move(a), (rhs_digit - rhs_span_) * rhs_step_};
}

Solution BoundedSdpProblem::solve_basis(std::span<const u128> basis) const {
  if (basis.empty()) throw EmptyInputError("sdp: empty basis");
  const int dd = d_ * d_;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  auto add_row = [&](std::vector<double> r, double b) {
    rows.push_back(std::move(r));
    rhs.push_back(b);
  };

  for (u128 idx : basis) {
    auto [a, b] = decode(idx);
    std::vector<double> r(var_dim_, 0.0);
    if (margin_) {
      // <A,X> >= b + sigma  ->  -<A,X> + sigma <= -b
      for (int i = 0; i < dd; ++i) r[i] = -a[i];
      r[dd] = 1.0;
      add_row(std::move(r), -b);
    } else {
      for (int i = 0; i < dd; ++i) r[i] = a[i];
      add_row(std::move(r), b);
    }
  }

  // Structural rows: symmetry, unit trace, entry box, margin box.
  for (int i = 0; i < d_; ++i)
    for (int j = i + 1; j < d_; ++j) {
      std::vector<double> r(var_dim_, 0.0);
      r[i * d_ + j] = 1.0;
      r[j * d_ + i] = -1.0;
      add_row(r, 0.0);
      for (double& v : r) v = -v;
      add_row(std::move(r), 0.0);
    }
  {
    std::vector<double> tr(var_dim_, 0.0);
    for (int i = 0; i < d_; ++i) tr[i * d_ + i] = 1.0;
    add_row(tr, 1.0);
    for (double& v : tr) v = -v;
    add_row(std::move(tr), -1.0);
  }
  for (int i = 0; i < var_dim_; ++i) {
    const double bound = (margin_ && i == dd) ? sparsity_ + 1.0 : 1.0;
    std::vector<double> up(var_dim_, 0.0), dn(var_dim_, 0.0);
    up[i] = 1.0;
    dn[i] = -1.0;
    add_row(std::move(up), bound);
    add_row(std::move(dn), bound);
  }

  auto add_psd_cut = [&](const std::vector<double>& z) {
    std::vector<double> r(var_dim_, 0.0);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) r[i * d_ + j] = -z[i] * z[j];
    add_row(std::move(r), 0.0);
  };
  // Seed the cut pool with the snapped basis vectors (diagonal >= 0 cuts).
  for (int j = 0; j < d_; ++j) {
    SdpMatrix probe;
    probe.d = d_;
    probe.entries.assign(dd, 0.0);
    probe.at(j, j) = -1.0;
    if (auto z = sdp_psd_violator(probe, eps_)) add_psd_cut(*z);
  }

  std::vector<double> objective(var_dim_, 0.0);
  if (margin_) {
    objective[dd] = 1.0;
  } else {
    for (int i = 0; i < dd; ++i) objective[i] = objective_dense_[i];
  }

  for (int round = 0; round < 200; ++round) {
    const ExactLpResult res = solve_bounded_lp(rows, rhs, objective);
    if (res.status == ExactLpResult::Status::Infeasible) return Infeasible{};
    SdpMatrix x;
    x.d = d_;
    x.entries.assign(res.x.begin(), res.x.begin() + dd);
    for (int i = 0; i < d_; ++i)
      for (int j = i + 1; j < d_; ++j) {
        const double v = 0.5 * (x.at(i, j) + x.at(j, i));
        x.at(i, j) = v;
        x.at(j, i) = v;
      }
    if (margin_) x.margin = res.x[dd];

    const auto z = sdp_psd_violator(x, eps_);
    if (!z) return x;
    double quad = 0.0;
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) quad += (*z)[i] * x.at(i, j) * (*z)[j];
    if (quad >= -1e-12) return x;  // lattice-feasible: the correction covers the rest
    add_psd_cut(*z);
  }
  throw Error("sdp: separation oracle failed to converge");
}

bool BoundedSdpProblem::violates(const Solution& sol, u128 index) const {
  if (std::holds_alternative<Infeasible>(sol)) return false;
  const auto& x = std::get<SdpMatrix>(sol);
  auto [a, b] = decode(index);
  double ip = 0.0;
  for (int i = 0; i < d_ * d_; ++i) ip += a[i] * x.entries[i];
  if (margin_) return ip < b + x.margin - 1e-12;
  return ip > b + 1e-12;
}

Solution BoundedSdpProblem::correct_solution(const Solution& sol) const {
  if (std::holds_alternative<Infeasible>(sol)) return sol;
  return sdp_correct(std::get<SdpMatrix>(sol), eps_);
}

}  // namespace streamlp
