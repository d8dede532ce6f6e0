#include <doctest.h>

#include <cmath>

#include "streamlp/problems/meb.hpp"
#include "streamlp/problems/oracles.hpp"

using namespace streamlp;

namespace {

std::vector<std::vector<double>> random_points(int n, int d, double span, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  for (auto& p : pts)
    for (double& x : p) x = std::floor(rng.next_double() * (2 * span + 1)) - span;
  return pts;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("welzl: single point gives a zero ball") {
  const Ball b = welzl_meb({{3.0, -1.0}});
  CHECK(b.center == std::vector<double>{3.0, -1.0});
  CHECK(b.radius == 0.0);
}

TEST_CASE("welzl: diameter pair") {
  const Ball b = welzl_meb({{0.0, 0.0}, {2.0, 0.0}});
  CHECK(b.center[0] == doctest::Approx(1.0));
  CHECK(b.center[1] == doctest::Approx(0.0));
  CHECK(b.radius == doctest::Approx(1.0));
}

TEST_CASE("welzl: equilateral triangle needs all three points") {
  const double h = std::sqrt(3.0) / 2.0;
  const Ball b = welzl_meb({{0.0, 0.0}, {1.0, 0.0}, {0.5, h}});
  // circumradius of a unit equilateral triangle
  CHECK(b.radius == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("welzl matches the subset-enumeration oracle on random instances") {
  for (int d = 2; d <= 3; ++d) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto pts = random_points(20, d, 50.0, seed * 31 + d);
      const Ball fast = welzl_meb(pts);
      const Ball slow = exact_meb(pts);
      CHECK(fast.radius == doctest::Approx(slow.radius).epsilon(1e-9));
      for (const auto& p : pts)
        CHECK(dist(fast.center, p) <= fast.radius * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("welzl: duplicates and input order do not change the result") {
  auto pts = random_points(30, 3, 20.0, 99);
  const Ball a = welzl_meb(pts);
  std::vector<std::vector<double>> doubled = pts;
  doubled.insert(doubled.end(), pts.rbegin(), pts.rend());
  const Ball b = welzl_meb(doubled);
  CHECK(a.center == b.center);
  CHECK(a.radius == b.radius);
}

TEST_CASE("exact_meb oracle edge cases") {
  const Ball b = exact_meb({{1.0, 2.0}});
  CHECK(b.center == std::vector<double>{1.0, 2.0});
  CHECK(b.radius == 0.0);
  CHECK_THROWS_AS(exact_meb({}), EmptyInputError);
}

TEST_CASE("meb_violates uses a relative guard") {
  const Ball b{{0.0, 0.0}, 1.0};
  CHECK_FALSE(meb_violates(b, std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(meb_violates(b, std::vector<double>{1.0, 0.0}));
  CHECK(meb_violates(b, std::vector<double>{2.0, 0.0}));
}

TEST_CASE("meb_correct inflates by (1+4eps)") {
  const Ball b{{1.0, 2.0}, 3.0};
  CHECK(meb_correct(b, 0.0).radius == 3.0);
  CHECK(meb_correct(b, 0.1).radius == doctest::Approx(3.0 * 1.4));
  const Ball zero{{0.0}, 0.0};
  CHECK(meb_correct(zero, 0.5).radius == 0.0);
}

TEST_CASE("meb problem plugin: snap/decode and violation agree with geometry") {
  NetConfig cfg;
  cfg.d = 2;
  cfg.eps = 0.1;
  cfg.center = {0.0, 0.0};
  cfg.r_max = 64.0;
  cfg.radial = true;
  MebProblem problem(cfg, 0.1);
  CHECK(problem.nu() == 3);
  CHECK(problem.lambda() == 3);
  CHECK(problem.universe_size() == net_size(cfg));

  StreamEvent ev;
  ev.payload = PointRecord{{3.0, 4.0}, 0};
  const u128 idx = problem.snap_event(ev);
  const auto rep = problem.decode(idx);
  const double n = std::sqrt(rep[0] * rep[0] + rep[1] * rep[1]);
  CHECK(n >= 5.0 - 1e-9);
  CHECK(n <= 5.0 * 1.1 + 1e-9);

  const Solution sol = Ball{{0.0, 0.0}, 1.0};
  CHECK(problem.violates(sol, idx));
}

TEST_CASE("meb correction encloses the original points of a random instance") {
  // the P3 pair: corrected ball of the snapped MEB encloses all originals
  // and stays within (1+4eps)^2 of the exact radius
  const double eps = 0.1;
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const auto pts = random_points(60, 2, 200.0, seed);
    NetConfig cfg;
    cfg.d = 2;
    cfg.eps = eps;
    cfg.center = pts[0];
    cfg.radial = true;
    double r_max = 0;
    for (const auto& p : pts) r_max = std::max(r_max, dist(pts[0], p));
    cfg.r_max = std::max(r_max, 1.0);
    MebProblem problem(cfg, eps);

    std::vector<u128> snapped;
    for (const auto& p : pts) {
      StreamEvent ev;
      ev.payload = PointRecord{p, 0};
      snapped.push_back(problem.snap_event(ev));
    }
    std::sort(snapped.begin(), snapped.end());
    snapped.erase(std::unique(snapped.begin(), snapped.end()), snapped.end());
    const Solution snapped_meb = problem.solve_basis(snapped);
    const Ball corrected = std::get<Ball>(problem.correct_solution(snapped_meb));
    const Ball exact = welzl_meb(pts);
    for (const auto& p : pts)
      CHECK(dist(corrected.center, p) <= corrected.radius + 1e-9);
    CHECK(corrected.radius <=
          (1 + 4 * eps) * (1 + 4 * eps) * exact.radius * (1 + 1e-9));
  }
}
