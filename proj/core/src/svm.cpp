#include "streamlp/problems/svm.hpp"

#include <algorithm>
#include <cmath>

namespace streamlp {

namespace {

using Point = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Min-norm point over conv({pos_i - neg_j}) via Wolfe's method with an
// implicit linear minimization oracle (the two hulls are minimized
// separately, so a step costs O(|pos| + |neg|), not |pos|*|neg|).
struct MinNormPoint {
  Point x;                                  // current point
  std::vector<std::pair<int, int>> corral;  // (pos index, neg index) pairs
  std::vector<double> lambda;
  bool converged = false;
};

Point vertex(const std::vector<Point>& pos, const std::vector<Point>& neg,
             std::pair<int, int> ij) {
  Point v = pos[ij.first];
  for (std::size_t c = 0; c < v.size(); ++c) v[c] -= neg[ij.second][c];
  return v;
}

std::pair<int, int> lmo(const std::vector<Point>& pos, const std::vector<Point>& neg,
                        const Point& w) {
  int bi = 0, bj = 0;
  double best = dot(pos[0], w);
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const double v = dot(pos[i], w);
    if (v < best - 1e-15 * (1.0 + std::abs(best))) {
      best = v;
      bi = static_cast<int>(i);
    }
  }
  double worst = dot(neg[0], w);
  for (std::size_t j = 1; j < neg.size(); ++j) {
    const double v = dot(neg[j], w);
    if (v > worst + 1e-15 * (1.0 + std::abs(worst))) {
      worst = v;
      bj = static_cast<int>(j);
    }
  }
  return {bi, bj};
}

// min |sum a_i v_i|^2 subject to sum a_i = 1 over the corral's affine hull.
std::vector<double> affine_min_norm(const std::vector<Point>& verts) {
  const std::size_t k = verts.size();
  const std::size_t n = k + 1;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = dot(verts[i], verts[j]);
    m[i][k] = 1.0;
    m[k][i] = 1.0;
  }
  rhs[k] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-14) return {};  // degenerate corral
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> a(k);
  for (std::size_t i = 0; i < k; ++i) a[i] = rhs[i] / m[i][i];
  return a;
}

MinNormPoint min_norm_point(const std::vector<Point>& pos, const std::vector<Point>& neg) {
  const std::size_t d = pos[0].size();
  MinNormPoint st;
  st.corral = {lmo(pos, neg, Point(d, 0.0))};
  st.lambda = {1.0};
  st.x = vertex(pos, neg, st.corral[0]);

  double scale = 1.0;
  for (const Point& p : pos) scale = std::max(scale, dot(p, p));
  for (const Point& q : neg) scale = std::max(scale, dot(q, q));

  for (int outer = 0; outer < 2000; ++outer) {
    const auto cand = lmo(pos, neg, st.x);
    const Point v = vertex(pos, neg, cand);
    const double xx = dot(st.x, st.x);
    if (dot(st.x, v) >= xx - 1e-12 * scale) {
      st.converged = true;
      return st;
    }
    bool dup = false;
    for (const auto& ij : st.corral)
      if (ij == cand) dup = true;
    if (dup) {  // numerically stalled
      st.converged = true;
      return st;
    }
    st.corral.push_back(cand);
    st.lambda.push_back(0.0);

    for (int inner = 0; inner < 200; ++inner) {
      std::vector<Point> verts;
      verts.reserve(st.corral.size());
      for (const auto& ij : st.corral) verts.push_back(vertex(pos, neg, ij));
      std::vector<double> a = affine_min_norm(verts);
      if (a.empty()) {
        // Degenerate corral: drop the smallest-coefficient vertex.
        std::size_t drop = 0;
        for (std::size_t i = 1; i < st.lambda.size(); ++i)
          if (st.lambda[i] < st.lambda[drop]) drop = i;
        st.corral.erase(st.corral.begin() + drop);
        st.lambda.erase(st.lambda.begin() + drop);
        continue;
      }
      bool interior = true;
      for (double ai : a)
        if (ai <= 1e-12) interior = false;
      if (interior) {
        st.lambda = a;
        break;
      }
      // Step from lambda toward a until the first coefficient hits zero.
      double theta = 1.0;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] <= 1e-12 && st.lambda[i] > a[i])
          theta = std::min(theta, st.lambda[i] / (st.lambda[i] - a[i]));
      for (std::size_t i = 0; i < a.size(); ++i)
        st.lambda[i] = (1.0 - theta) * st.lambda[i] + theta * a[i];
      for (std::size_t i = st.lambda.size(); i-- > 0;) {
        if (st.lambda[i] <= 1e-12 && st.lambda.size() > 1) {
          st.corral.erase(st.corral.begin() + i);
          st.lambda.erase(st.lambda.begin() + i);
        }
      }
    }

    st.x.assign(d, 0.0);
    double lsum = 0.0;
    for (double l : st.lambda) lsum += l;
    for (std::size_t i = 0; i < st.corral.size(); ++i) {
      const Point v2 = vertex(pos, neg, st.corral[i]);
      for (std::size_t c = 0; c < d; ++c) st.x[c] += st.lambda[i] / lsum * v2[c];
    }
  }
  st.converged = true;  // tolerance-level stall; x is still a valid certificate
  return st;
}

}  // namespace

Solution svm_solve_exact(const std::vector<Point>& positives,
                         const std::vector<Point>& negatives) {
  if (positives.empty() && negatives.empty())
    throw EmptyInputError("svm: no points");
  if (positives.empty() || negatives.empty()) {
    const int present = positives.empty() ? -1 : +1;
    const std::size_t d = positives.empty() ? negatives[0].size() : positives[0].size();
    // One-class input: u = 0 with b = -y satisfies every margin at the
    // minimal objective.
    return Hyperplane{Point(d, 0.0), static_cast<double>(-present)};
  }
  // Deterministic vertex order.
  std::vector<Point> pos = positives;
  std::vector<Point> neg = negatives;
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::sort(neg.begin(), neg.end());
  neg.erase(std::unique(neg.begin(), neg.end()), neg.end());

  const MinNormPoint st = min_norm_point(pos, neg);
  const double gap2 = dot(st.x, st.x);
  if (gap2 <= 1e-18) return Infeasible{};

  const std::size_t d = st.x.size();
  Hyperplane h;
  h.u.resize(d);
  for (std::size_t c = 0; c < d; ++c) h.u[c] = 2.0 * st.x[c] / gap2;
  double lo = dot(pos[0], h.u);
  for (const Point& p : pos) lo = std::min(lo, dot(p, h.u));
  double hi = dot(neg[0], h.u);
  for (const Point& q : neg) hi = std::max(hi, dot(q, h.u));
  if (lo - hi <= 1e-9) return Infeasible{};  // hulls touch within tolerance
  h.b = 0.5 * (lo + hi);
  return h;
}

bool svm_violates(const Hyperplane& h, std::span<const double> z, int label) {
  return label * (dot(h.u, z) - h.b) < 1.0 - 1e-9;
}

Hyperplane svm_correct(const Hyperplane& h, double eps) {
  Hyperplane out = h;
  for (double& c : out.u) c *= 1.0 + 2.0 * eps;
  out.b *= 1.0 + 2.0 * eps;
  return out;
}

SvmProblem::SvmProblem(int d, double eps, double gamma) : d_(d), eps_(eps), gamma_(gamma) {
  if (!(gamma > 0.0)) throw UsageError("svm: gamma must be positive");
  if (!(eps > 0.0 && eps <= 0.5)) throw UsageError("svm: eps must be in (0, 1/2]");
  cfg_.d = d;
  cfg_.eps = eps * gamma / 2.0;
  cfg_.radial = false;
  cfg_.validate();
  net_universe_ = net_size(cfg_);
}

u128 SvmProblem::snap_event(const StreamEvent& ev) const {
  const PointRecord& rec = ev.point();
  if (rec.label != 1 && rec.label != -1) throw UsageError("svm: event without a +-1 label");
  const u128 base = flat_index(snap(rec.coords, cfg_), cfg_);
  return rec.label == 1 ? net_universe_ + base : base;
}

std::pair<std::vector<double>, int> SvmProblem::decode(u128 index) const {
  const int label = index >= net_universe_ ? 1 : -1;
  const u128 flat = label == 1 ? index - net_universe_ : index;
  return {unsnap(from_flat(flat, cfg_), cfg_), label};
}

Solution SvmProblem::solve_basis(std::span<const u128> basis) const {
  if (basis.empty()) throw EmptyInputError("svm: empty basis");
  std::vector<Point> pos, neg;
  for (u128 idx : basis) {
    auto [z, label] = decode(idx);
    (label == 1 ? pos : neg).push_back(std::move(z));
  }
  return svm_solve_exact(pos, neg);
}

bool SvmProblem::violates(const Solution& sol, u128 index) const {
  if (std::holds_alternative<Infeasible>(sol)) return false;
  const auto& h = std::get<Hyperplane>(sol);
  auto [z, label] = decode(index);
  return svm_violates(h, z, label);
}

Solution SvmProblem::correct_solution(const Solution& sol) const {
  if (std::holds_alternative<Infeasible>(sol)) return sol;
  return svm_correct(std::get<Hyperplane>(sol), eps_);
}

}  // namespace streamlp
