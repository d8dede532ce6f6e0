#include "streamlp/problems/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "streamlp/common.hpp"

namespace streamlp {

namespace {

using Vec = std::vector<double>;

double dist2(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Plain Gaussian elimination with partial pivoting; empty result if the
// system is singular. Own copy so the oracles do not share the plugins'
// linear algebra.
Vec gauss_solve(std::vector<Vec> m, Vec rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12) return {};
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= m[i][c] * x[c];
    x[i] = acc / m[i][i];
  }
  return x;
}

// Enumerate k-subsets of [0, n).
template <class F>
void for_each_subset(int n, int k, F&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

// Circumcenter of the subset, restricted to its affine hull (where the
// minimum-radius circumcenter lives): c = p_0 + sum beta_i (p_i - p_0) with
// the chord equations (p_i - p_0).c = (|p_i|^2 - |p_0|^2)/2. Degenerate
// subsets are skipped; their balls appear as smaller subsets.
std::optional<Vec> circumcenter(const std::vector<Vec>& pts, const std::vector<int>& sub) {
  const std::size_t d = pts[sub[0]].size();
  const std::size_t k = sub.size();
  if (k == 1) return pts[sub[0]];
  const std::size_t n = k - 1;
  std::vector<Vec> v(n, Vec(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) v[i][c] = pts[sub[i + 1]][c] - pts[sub[0]][c];
  std::vector<Vec> m(n, Vec(n));
  Vec rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = dot(v[i], v[j]);
    rhs[i] = 0.5 * dot(v[i], v[i]);
  }
  const Vec beta = gauss_solve(std::move(m), std::move(rhs));
  if (beta.empty()) return std::nullopt;
  Vec c = pts[sub[0]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t cc = 0; cc < d; ++cc) c[cc] += beta[i] * v[i][cc];
  return c;
}

}  // namespace

Ball exact_meb(const std::vector<Vec>& points) {
  if (points.empty()) throw EmptyInputError("exact_meb: no points");
  std::vector<Vec> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const int n = static_cast<int>(pts.size());
  const int d = static_cast<int>(pts[0].size());

  Ball best;
  best.radius = -1.0;
  for (int k = 1; k <= std::min(n, d + 1); ++k) {
    for_each_subset(n, k, [&](const std::vector<int>& sub) {
      const auto center = circumcenter(pts, sub);
      if (!center) return;
      double r2 = 0.0;
      for (int i : sub) r2 = std::max(r2, dist2(*center, pts[i]));
      const double r = std::sqrt(r2);
      if (best.radius >= 0.0 && r >= best.radius) return;
      for (const Vec& p : pts)
        if (dist2(*center, p) > r2 * (1.0 + 1e-9) + 1e-18) return;
      best.center = *center;
      best.radius = r;
    });
  }
  if (best.radius < 0.0) throw Error("exact_meb: no enclosing subset ball found");
  return best;
}

Solution exact_svm(const std::vector<Vec>& positives, const std::vector<Vec>& negatives) {
  if (positives.empty() && negatives.empty()) throw EmptyInputError("exact_svm: no points");
  if (positives.empty() || negatives.empty()) {
    const int present = positives.empty() ? -1 : +1;
    const std::size_t d = positives.empty() ? negatives[0].size() : positives[0].size();
    return Hyperplane{Vec(d, 0.0), static_cast<double>(-present)};
  }
  const int d = static_cast<int>(positives[0].size());
  const int np = static_cast<int>(positives.size());
  const int nn = static_cast<int>(negatives.size());

  bool found = false;
  double best_obj = 0.0;
  Hyperplane best;

  auto try_support = [&](const std::vector<int>& sp, const std::vector<int>& sn) {
    // Solve for margins exactly 1 on the support with stationarity
    // u = sum alpha_i p_i - sum beta_j q_j and sum alpha = sum beta.
    const int a = static_cast<int>(sp.size());
    const int b = static_cast<int>(sn.size());
    const int n = a + b + 1;  // alpha, beta, bias
    std::vector<Vec> m(n, Vec(n, 0.0));
    Vec rhs(n, 0.0);
    auto vec_of = [&](int t) -> const Vec& {
      return t < a ? positives[sp[t]] : negatives[sn[t - a]];
    };
    auto sign_of = [&](int t) { return t < a ? 1.0 : -1.0; };
    for (int r = 0; r < a + b; ++r) {
      for (int c = 0; c < a + b; ++c)
        m[r][c] = sign_of(c) * dot(vec_of(r), vec_of(c));
      m[r][a + b] = -1.0;
      rhs[r] = sign_of(r) * 1.0;
    }
    for (int c = 0; c < a + b; ++c) m[a + b][c] = sign_of(c);
    rhs[a + b] = 0.0;
    const Vec sol = gauss_solve(m, rhs);
    if (sol.empty()) return;
    for (int t = 0; t < a + b; ++t)
      if (sol[t] < -1e-9) return;  // KKT multipliers must be nonnegative
    Vec u(d, 0.0);
    for (int t = 0; t < a + b; ++t)
      for (int c = 0; c < d; ++c) u[c] += sign_of(t) * sol[t] * vec_of(t)[c];
    const double bias = sol[a + b];
    for (const Vec& p : positives)
      if (dot(u, p) - bias < 1.0 - 1e-7) return;
    for (const Vec& q : negatives)
      if (-(dot(u, q) - bias) < 1.0 - 1e-7) return;
    const double obj = dot(u, u);
    if (!found || obj < best_obj - 1e-12) {
      found = true;
      best_obj = obj;
      best = Hyperplane{u, bias};
    }
  };

  for (int a = 1; a <= std::min(np, d + 1); ++a)
    for (int b = 1; b <= std::min(nn, d + 1); ++b) {
      if (a + b > d + 2) continue;
      for_each_subset(np, a, [&](const std::vector<int>& sp) {
        for_each_subset(nn, b, [&](const std::vector<int>& sn) { try_support(sp, sn); });
      });
    }
  if (!found) return Infeasible{};
  return best;
}

std::optional<LpPoint> exact_lp(const std::vector<Vec>& rows, const Vec& rhs,
                                const Vec& objective) {
  const int d = static_cast<int>(objective.size());
  const int m = static_cast<int>(rows.size());
  bool found = false;
  double best = 0.0;
  Vec best_x;
  for_each_subset(m, d, [&](const std::vector<int>& sub) {
    std::vector<Vec> a;
    Vec b;
    for (int i : sub) {
      a.push_back(rows[i]);
      b.push_back(rhs[i]);
    }
    const Vec x = gauss_solve(std::move(a), std::move(b));
    if (x.empty()) return;
    for (int i = 0; i < m; ++i)
      if (dot(rows[i], x) > rhs[i] + 1e-9) return;
    const double obj = dot(objective, x);
    if (!found || obj > best + 1e-9 ||
        (obj > best - 1e-9 && std::lexicographical_compare(x.begin(), x.end(),
                                                           best_x.begin(), best_x.end()))) {
      found = true;
      best = obj;
      best_x = x;
    }
  });
  if (!found) return std::nullopt;
  return LpPoint{best_x};
}

std::optional<SdpGridOracle> exact_sdp_grid(const std::vector<Vec>& a_dense,
                                            const Vec& b, const Vec& c_dense,
                                            bool maximize_margin, double grid_step) {
  // X = [[x, y], [y, 1-x]]; every <A,X> is linear in (x, y):
  // <A,X> = A11 + (A00 - A11) x + (A01 + A10) y.
  const std::size_t m = a_dense.size();
  std::vector<double> base(m), cx(m), cy(m);
  for (std::size_t i = 0; i < m; ++i) {
    base[i] = a_dense[i][3];
    cx[i] = a_dense[i][0] - a_dense[i][3];
    cy[i] = a_dense[i][1] + a_dense[i][2];
  }
  const double obase = c_dense[3], ocx = c_dense[0] - c_dense[3], ocy = c_dense[1] + c_dense[2];

  bool found = false;
  double best = 0.0, bx = 0.0, by = 0.0;
  const long long steps = std::llround(1.0 / grid_step);
  for (long long ix = 0; ix <= steps; ++ix) {
    const double x = double(ix) / steps;
    const double ymax = std::sqrt(std::max(0.0, x * (1.0 - x)));
    const long long ylim = static_cast<long long>(std::floor(ymax / grid_step));
    for (long long iy = -ylim; iy <= ylim; ++iy) {
      const double y = iy * grid_step;
      double value;
      if (maximize_margin) {
        value = 1e300;
        for (std::size_t i = 0; i < m; ++i)
          value = std::min(value, base[i] + cx[i] * x + cy[i] * y - b[i]);
      } else {
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i)
          if (base[i] + cx[i] * x + cy[i] * y > b[i]) ok = false;
        if (!ok) continue;
        value = obase + ocx * x + ocy * y;
      }
      if (!found || value > best) {
        found = true;
        best = value;
        bx = x;
        by = y;
      }
    }
  }
  if (!found) return std::nullopt;
  SdpGridOracle out;
  out.objective = best;
  out.x.d = 2;
  out.x.entries = {bx, by, by, 1.0 - bx};
  if (maximize_margin) out.x.margin = best;
  return out;
}

}  // namespace streamlp
