#include "streamlp/simplex.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <optional>

namespace streamlp {

namespace {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Gaussian elimination with partial (first nonzero, Bland-friendly) pivoting;
// exact, so any nonzero pivot works. Returns nullopt on a singular system.
std::optional<RatVec> solve_square(RatMat a, RatVec b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rat f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RatVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rat acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

struct TightSetSimplex {
  const RatMat& rows;
  const RatVec& rhs;
  std::size_t d;

  // Primal simplex on the dual (min rhs.y, rows^T y = obj, y >= 0); the
  // basis is a set of d tight primal rows. Returns the primal optimum, or
  // nullopt when the primal is infeasible (dual unbounded).
  std::optional<RatVec> optimize(const RatVec& obj, std::vector<std::size_t>& basis) const {
    const std::size_t m = rows.size();
    for (;;) {
      RatMat a_b(d, RatVec(d));
      RatMat a_bt(d, RatVec(d));
      RatVec b_b(d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          a_b[i][j] = rows[basis[i]][j];
          a_bt[j][i] = rows[basis[i]][j];
        }
        b_b[i] = rhs[basis[i]];
      }
      auto y = solve_square(a_bt, obj);
      auto x = solve_square(a_b, b_b);
      if (!y || !x) throw Error("simplex: singular basis");

      // Bland: smallest violated row enters.
      std::size_t entering = m;
      for (std::size_t j = 0; j < m && entering == m; ++j) {
        if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
        Rat slack = rhs[j];
        for (std::size_t c = 0; c < d; ++c) slack -= rows[j][c] * (*x)[c];
        if (slack < 0) entering = j;
      }
      if (entering == m) return x;  // all rows satisfied: primal optimal

      RatMat a_bt2(d, RatVec(d));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a_bt2[j][i] = rows[basis[i]][j];
      RatVec col(rows[entering].begin(), rows[entering].end());
      auto w = solve_square(a_bt2, col);
      if (!w) throw Error("simplex: singular basis direction");

      // Ratio test on y - t*w >= 0; Bland tie-break on the row index.
      std::size_t leave = d;
      Rat best;
      for (std::size_t i = 0; i < d; ++i) {
        if ((*w)[i] <= 0) continue;
        const Rat ratio = (*y)[i] / (*w)[i];
        if (leave == d || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == d) return std::nullopt;  // dual unbounded: primal infeasible
      basis[leave] = entering;
      std::sort(basis.begin(), basis.end());
    }
  }
};

}  // namespace

ExactLpResult solve_bounded_lp(const std::vector<std::vector<double>>& rows_in,
                               const std::vector<double>& rhs_in,
                               const std::vector<double>& objective_in) {
  if (rows_in.empty() || rows_in.size() != rhs_in.size())
    throw UsageError("solve_bounded_lp: rows/rhs size mismatch");
  const std::size_t d = objective_in.size();
  const std::size_t m = rows_in.size();

  RatMat rows(m, RatVec(d));
  RatVec rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows_in[i].size() != d) throw UsageError("solve_bounded_lp: row dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) rows[i][j] = Rat(rows_in[i][j]);
    rhs[i] = Rat(rhs_in[i]);
  }
  RatVec obj(d);
  for (std::size_t j = 0; j < d; ++j) obj[j] = Rat(objective_in[j]);

  // Initial dual-feasible basis out of the +-e_j box rows: pick the +e_j row
  // when c_j >= 0, the -e_j row otherwise.
  std::vector<std::size_t> basis;
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t found = m;
    for (std::size_t i = 0; i < m && found == m; ++i) {
      bool unit = true;
      for (std::size_t c = 0; c < d; ++c) {
        const Rat want = (c == j) ? (obj[j] >= 0 ? Rat(1) : Rat(-1)) : Rat(0);
        if (rows[i][c] != want) unit = false;
      }
      if (unit) found = i;
    }
    if (found == m)
      throw UsageError("solve_bounded_lp: missing +-e_" + std::to_string(j) + " box row");
    basis.push_back(found);
  }
  std::sort(basis.begin(), basis.end());

  TightSetSimplex solver{rows, rhs, d};
  auto opt = solver.optimize(obj, basis);
  if (!opt) return ExactLpResult{};

  Rat z = 0;
  for (std::size_t j = 0; j < d; ++j) z += obj[j] * (*opt)[j];

  // Lexicographic refinement: pin the optimal value, then minimize each
  // coordinate in turn. Everything stays exact, so the returned point is
  // exactly the lexicographically smallest optimum.
  RatMat ext_rows = rows;
  RatVec ext_rhs = rhs;
  {
    RatVec neg_obj(d);
    for (std::size_t j = 0; j < d; ++j) neg_obj[j] = -obj[j];
    ext_rows.push_back(neg_obj);
    ext_rhs.push_back(-z);
  }
  RatVec point = *opt;
  for (std::size_t j = 0; j < d; ++j) {
    TightSetSimplex refine{ext_rows, ext_rhs, d};
    RatVec minimize_j(d, Rat(0));
    minimize_j[j] = Rat(-1);
    // Re-seed the basis from box rows for the new objective.
    std::vector<std::size_t> rb;
    for (std::size_t jj = 0; jj < d; ++jj) {
      std::size_t found = ext_rows.size();
      for (std::size_t i = 0; i < rows.size() && found == ext_rows.size(); ++i) {
        bool unit = true;
        for (std::size_t c = 0; c < d; ++c) {
          const Rat want = (c == jj) ? (minimize_j[jj] >= 0 ? Rat(1) : Rat(-1)) : Rat(0);
          if (rows[i][c] != want) unit = false;
        }
        if (unit) found = i;
      }
      rb.push_back(found);
    }
    std::sort(rb.begin(), rb.end());
    auto refined = refine.optimize(minimize_j, rb);
    if (!refined) throw Error("simplex: optimal face refinement infeasible");
    point = *refined;
    RatVec fix(d, Rat(0));
    fix[j] = Rat(1);
    ext_rows.push_back(fix);
    ext_rhs.push_back(point[j]);
  }

  ExactLpResult out;
  out.status = ExactLpResult::Status::Optimal;
  out.x.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.x[j] = point[j].get_d();
  out.objective = z.get_d();
  return out;
}

}  // namespace streamlp
