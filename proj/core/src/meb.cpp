#include "streamlp/problems/meb.hpp"

#include <algorithm>
#include <cmath>

namespace streamlp {

namespace {

using Point = std::vector<double>;

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool in_ball(const Ball& ball, std::span<const double> p) {
  if (ball.radius < 0.0) return false;
  const double r2 = ball.radius * ball.radius;
  return dist2(ball.center, p) <= r2 * (1.0 + 1e-10) + 1e-30;
}

// Circumball of 1..d+1 affinely independent support points. The center is
// unique whenever the equidistance system is consistent (the Gram system's
// null space does not move the center), so zeroing free variables under
// rank deficiency is exact.
Ball ball_of_support(const std::vector<Point>& support) {
  Ball ball;
  if (support.empty()) {
    ball.radius = -1.0;
    return ball;
  }
  const std::size_t d = support[0].size();
  const std::size_t k = support.size();
  ball.center = support[0];
  ball.radius = 0.0;
  if (k == 1) return ball;

  const std::size_t n = k - 1;
  std::vector<Point> v(n, Point(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) v[i][j] = support[i + 1][j] - support[0][j];

  std::vector<std::vector<double>> g(n, std::vector<double>(n));
  std::vector<double> rhs(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += v[i][c] * v[j][c];
      g[i][j] = s;
    }
    rhs[i] = 0.5 * g[i][i];
    scale = std::max(scale, std::abs(g[i][i]));
  }

  // Pivoted elimination; near-zero pivots mark dependent directions whose
  // coefficients are left at zero.
  std::vector<double> beta(n, 0.0);
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  const double tol = std::max(scale, 1.0) * 1e-12;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank; r < n; ++r)
      if (std::abs(g[r][col]) > std::abs(g[piv][col])) piv = r;
    if (std::abs(g[piv][col]) <= tol) continue;
    std::swap(g[piv], g[rank]);
    std::swap(rhs[piv], rhs[rank]);
    std::swap(order[piv], order[rank]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank || g[r][col] == 0.0) continue;
      const double f = g[r][col] / g[rank][col];
      for (std::size_t c = 0; c < n; ++c) g[r][c] -= f * g[rank][c];
      rhs[r] -= f * rhs[rank];
    }
    ++rank;
    if (rank == n) break;
  }
  // Back out: each pivot row now has a single dominant column.
  for (std::size_t r = 0; r < rank; ++r) {
    std::size_t lead = 0;
    while (lead < n && std::abs(g[r][lead]) <= tol) ++lead;
    if (lead == n) continue;
    beta[lead] = rhs[r] / g[r][lead];
  }

  for (std::size_t j = 0; j < d; ++j) {
    double c = support[0][j];
    for (std::size_t i = 0; i < n; ++i) c += beta[i] * v[i][j];
    ball.center[j] = c;
  }
  double r2 = 0.0;
  for (const Point& p : support) r2 = std::max(r2, dist2(ball.center, p));
  ball.radius = std::sqrt(r2);
  return ball;
}

Ball mtf_welzl(std::vector<Point>& pts, std::size_t end, std::vector<Point>& support,
               std::size_t d) {
  Ball ball = ball_of_support(support);
  if (support.size() == d + 1) return ball;
  for (std::size_t i = 0; i < end; ++i) {
    if (in_ball(ball, pts[i])) continue;
    support.push_back(pts[i]);
    ball = mtf_welzl(pts, i, support, d);
    support.pop_back();
    std::rotate(pts.begin(), pts.begin() + i, pts.begin() + i + 1);
  }
  return ball;
}

}  // namespace

Ball welzl_meb(std::vector<Point> points) {
  if (points.empty()) throw EmptyInputError("welzl_meb: no points");
  const std::size_t d = points[0].size();
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Rng rng(0x7f4a7c15u);
  for (std::size_t i = points.size(); i > 1; --i)
    std::swap(points[i - 1], points[rng.below(i)]);
  std::vector<Point> support;
  return mtf_welzl(points, points.size(), support, d);
}

bool meb_violates(const Ball& ball, std::span<const double> q) {
  const double r = ball.radius * (1.0 + 1e-12);
  return dist2(ball.center, q) > r * r;
}

Ball meb_correct(const Ball& ball, double eps) {
  return Ball{ball.center, (1.0 + 4.0 * eps) * ball.radius};
}

MebProblem::MebProblem(NetConfig cfg, double eps) : cfg_(std::move(cfg)), eps_(eps) {
  if (!cfg_.radial) throw UsageError("MebProblem requires a radial net");
  cfg_.validate();
  universe_ = net_size(cfg_);
}

u128 MebProblem::snap_event(const StreamEvent& ev) const {
  return flat_index(snap(ev.point().coords, cfg_), cfg_);
}

std::vector<double> MebProblem::decode(u128 index) const {
  return unsnap(from_flat(index, cfg_), cfg_);
}

Solution MebProblem::solve_basis(std::span<const u128> basis) const {
  if (basis.empty()) throw EmptyInputError("meb: empty basis");
  std::vector<std::vector<double>> pts;
  pts.reserve(basis.size());
  for (u128 idx : basis) pts.push_back(decode(idx));
  return welzl_meb(std::move(pts));
}

bool MebProblem::violates(const Solution& sol, u128 index) const {
  const auto& ball = std::get<Ball>(sol);
  return meb_violates(ball, decode(index));
}

Solution MebProblem::correct_solution(const Solution& sol) const {
  return meb_correct(std::get<Ball>(sol), eps_);
}

}  // namespace streamlp
