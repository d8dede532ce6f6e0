#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "streamlp/problems/oracles.hpp"
#include "streamlp/problems/sdp.hpp"

using namespace streamlp;

namespace {

SdpMatrix mat2(double a, double b, double c, double d) {
  SdpMatrix m;
  m.d = 2;
  m.entries = {a, b, c, d};
  return m;
}

double lambda_min(const SdpMatrix& m) {
  Eigen::MatrixXd x(m.d, m.d);
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) x(i, j) = m.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x);
  return eig.eigenvalues()(0);
}

StreamEvent sdp_event(std::vector<SdpEntry> entries, double rhs) {
  StreamEvent ev;
  ev.payload = SdpConstraint{std::move(entries), rhs};
  return ev;
}

double frob_ip(const std::vector<double>& a, const SdpMatrix& x) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x.entries[i];
  return s;
}

}  // namespace

TEST_CASE("psd violator: identity is certified psd") {
  CHECK_FALSE(sdp_psd_violator(mat2(1, 0, 0, 1), 0.1).has_value());
}

TEST_CASE("psd violator: indefinite diagonal yields a violating lattice vector") {
  const SdpMatrix x = mat2(1, 0, 0, -1);
  const auto z = sdp_psd_violator(x, 0.1);
  REQUIRE(z.has_value());
  double quad = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) quad += (*z)[i] * x.at(i, j) * (*z)[j];
  CHECK(quad < 0.0);
  // the returned vector lies on the eps/(d sqrt d) lattice
  const double step = 0.1 / (2 * std::sqrt(2.0));
  for (double v : *z) CHECK(std::abs(v / step - std::round(v / step)) < 1e-9);
}

TEST_CASE("psd violator: strongly indefinite random matrices are always cut") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    SdpMatrix x = mat2(0, 0, 0, 0);
    x.at(0, 0) = rng.next_double() * 2 - 1;
    x.at(1, 1) = rng.next_double() * 2 - 1;
    const double off = rng.next_double() * 2 - 1;
    x.at(0, 1) = off;
    x.at(1, 0) = off;
    if (lambda_min(x) >= -0.1) continue;
    const auto z = sdp_psd_violator(x, 0.1);
    REQUIRE(z.has_value());
    double quad = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) quad += (*z)[i] * x.at(i, j) * (*z)[j];
    CHECK(quad < 0.0);
  }
}

TEST_CASE("sdp_correct: spectral shift then trace renormalization") {
  const double eps = 0.1;
  // eps = 0 is the identity
  CHECK(sdp_correct(mat2(0.5, 0.1, 0.1, 0.5), 0.0) == mat2(0.5, 0.1, 0.1, 0.5));
  // lambda_min = -3 eps/d becomes exactly 0
  const double a = 3 * eps / 2;
  const SdpMatrix x = mat2(a + 0.5, 0, 0, -a);
  const SdpMatrix c = sdp_correct(x, eps);
  CHECK(lambda_min(c) == doctest::Approx(0.0).epsilon(1e-12));
  // trace is renormalized to (tr + 3 eps)/(1 + 3 eps); unit trace stays unit
  const SdpMatrix unit = mat2(0.7, 0.0, 0.0, 0.3);
  CHECK(sdp_correct(unit, eps).trace() == doctest::Approx(1.0));
}

TEST_CASE("sdp snapping: zero matrix and fixed points") {
  BoundedSdpProblem problem(2, 0.1, 2, 1.5, {{0, 0, 1.0}});
  const u128 idx = problem.snap_event(sdp_event({}, 0.0));
  auto [a, b] = problem.decode(idx);
  for (double v : a) CHECK(v == 0.0);
  CHECK(b == 0.0);
  // entries already multiples of eps/min(d,S) = 0.05 are fixed points
  const u128 idx2 =
      problem.snap_event(sdp_event({{0, 0, 0.25}, {1, 1, -0.4}}, 0.3));
  auto [a2, b2] = problem.decode(idx2);
  CHECK(a2[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(a2[3] == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(b2 == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("sdp snapping: random entries move at most half a step") {
  BoundedSdpProblem problem(2, 0.1, 2, 1.5, {{0, 0, 1.0}});
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const double v = rng.next_double() * 2 - 1;
    const double b = rng.next_double() * 2 - 1;
    const u128 idx = problem.snap_event(sdp_event({{0, 1, v}, {1, 0, v}}, b));
    auto [a, bs] = problem.decode(idx);
    CHECK(std::abs(a[1] - v) <= 0.05 / 2 + 1e-12);
    CHECK(std::abs(a[2] - v) <= 0.05 / 2 + 1e-12);
    CHECK(std::abs(bs - b) <= 0.1 / 2 + 1e-12);
  }
}

TEST_CASE("sdp snapping: bound violations are rejected at ingest") {
  BoundedSdpProblem problem(2, 0.1, 2, 1.5, {{0, 0, 1.0}});
  // asymmetric
  CHECK_THROWS_AS(problem.snap_event(sdp_event({{0, 1, 0.5}}, 0.0)), InputBoundsError);
  // too many nonzeros
  CHECK_THROWS_AS(problem.snap_event(
                      sdp_event({{0, 0, 0.1}, {1, 1, 0.1}, {0, 1, 0.1}, {1, 0, 0.1}}, 0.0)),
                  InputBoundsError);
  // spectral norm above 1
  CHECK_THROWS_AS(problem.snap_event(sdp_event({{0, 0, 1.5}}, 0.0)), InputBoundsError);
  // rhs outside [-1, 1]
  CHECK_THROWS_AS(problem.snap_event(sdp_event({{0, 0, 0.5}}, 1.5)), InputBoundsError);
}

TEST_CASE("sdp solve_basis: the corrected solution is psd, unit trace, eps-feasible") {
  const double eps = 0.1;
  Rng rng(5);
  BoundedSdpProblem problem(2, eps, 2, 1.5, {{0, 0, 0.6}, {1, 1, 0.4}});
  // planted-feasible constraints around X0 = I/2
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<u128> snapped;
  for (int i = 0; i < 25; ++i) {
    std::vector<SdpEntry> entries;
    double diag0 = 0, diag1 = 0, off = 0;
    if (rng.next_double() < 0.5) {
      diag0 = rng.next_double() * 2 - 1;
      diag1 = rng.next_double() * 2 - 1;
      entries = {{0, 0, diag0}, {1, 1, diag1}};
    } else {
      off = (rng.next_double() * 2 - 1) * 0.9;
      entries = {{0, 1, off}, {1, 0, off}};
    }
    const double ip0 = 0.5 * diag0 + 0.5 * diag1;  // <A, I/2>
    const double b = std::min(1.0, ip0 + 0.05 + rng.next_double() * 0.4);
    snapped.push_back(problem.snap_event(sdp_event(entries, b)));
    rows.push_back({diag0, off, off, diag1});
    rhs.push_back(b);
  }
  std::sort(snapped.begin(), snapped.end());
  snapped.erase(std::unique(snapped.begin(), snapped.end()), snapped.end());

  const Solution sol = problem.solve_basis(snapped);
  REQUIRE_FALSE(is_infeasible(sol));
  const SdpMatrix corrected = std::get<SdpMatrix>(problem.correct_solution(sol));
  CHECK(lambda_min(corrected) >= -1e-9);
  CHECK(corrected.trace() == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(frob_ip(rows[i], corrected) <= rhs[i] + 5 * eps);

  // objective within 5 eps of the grid oracle
  const auto oracle = exact_sdp_grid(rows, rhs, {0.6, 0.0, 0.0, 0.4});
  REQUIRE(oracle.has_value());
  const double got = frob_ip({0.6, 0.0, 0.0, 0.4}, corrected);
  CHECK(std::abs(got - oracle->objective) <= 5 * eps);
}

TEST_CASE("saddle: single constraint <I/d, X> >= 0 has margin 1/d") {
  auto problem = saddle_to_sdp(2, 0.05, 2, 1.5);
  const u128 idx =
      problem.snap_event(sdp_event({{0, 0, 0.5}, {1, 1, 0.5}}, 0.0));
  const Solution sol = problem.solve_basis(std::vector<u128>{idx});
  REQUIRE_FALSE(is_infeasible(sol));
  const auto& x = std::get<SdpMatrix>(sol);
  CHECK(x.margin == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("saddle: two-constraint instance matches the margin grid oracle") {
  const double eps = 0.05;
  auto problem = saddle_to_sdp(2, eps, 4, 1.5);
  const std::vector<std::vector<double>> rows = {{1.0, 0.0, 0.0, -0.5},
                                                 {-0.3, 0.2, 0.2, 0.6}};
  const std::vector<double> rhs = {-0.2, 0.1};
  std::vector<u128> snapped;
  snapped.push_back(problem.snap_event(
      sdp_event({{0, 0, rows[0][0]}, {1, 1, rows[0][3]}}, rhs[0])));
  snapped.push_back(problem.snap_event(
      sdp_event({{0, 0, rows[1][0]}, {0, 1, rows[1][1]}, {1, 0, rows[1][2]}, {1, 1, rows[1][3]}},
                rhs[1])));
  std::sort(snapped.begin(), snapped.end());
  const Solution sol = problem.solve_basis(snapped);
  REQUIRE_FALSE(is_infeasible(sol));
  const auto oracle = exact_sdp_grid(rows, rhs, {0, 0, 0, 0}, /*maximize_margin=*/true);
  REQUIRE(oracle.has_value());
  CHECK(std::get<SdpMatrix>(sol).margin >= oracle->objective - eps);
}
