#include <doctest.h>

#include <cmath>

#include "streamlp/problems/oracles.hpp"
#include "streamlp/problems/svm.hpp"

using namespace streamlp;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return dot(a, a); }

// gamma-separable instance: points on two sides of a random hyperplane with
// margin at least gamma (normal of unit length).
struct LabeledSet {
  std::vector<std::vector<double>> pos, neg;
};

LabeledSet separable_instance(int n_per_class, int d, double gamma, std::uint64_t seed,
                              int grid = 200) {
  Rng rng(seed);
  std::vector<double> w(d);
  double wn = 0;
  for (double& x : w) {
    x = rng.next_double() - 0.5;
    wn += x * x;
  }
  wn = std::sqrt(wn);
  for (double& x : w) x /= wn;
  const double bias = (rng.next_double() - 0.5) * 0.2;
  LabeledSet out;
  while (static_cast<int>(out.pos.size()) < n_per_class ||
         static_cast<int>(out.neg.size()) < n_per_class) {
    std::vector<double> p(d);
    for (double& x : p) x = std::floor(rng.next_double() * (grid + 1)) * 2.0 / grid - 1.0;
    const double side = dot(w, p) - bias;
    if (side >= gamma / 2 && static_cast<int>(out.pos.size()) < n_per_class)
      out.pos.push_back(p);
    else if (side <= -gamma / 2 && static_cast<int>(out.neg.size()) < n_per_class)
      out.neg.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("svm: symmetric pair gives the unit separator") {
  const Solution sol = svm_solve_exact({{1.0, 0.0}}, {{-1.0, 0.0}});
  const auto& h = std::get<Hyperplane>(sol);
  CHECK(h.u[0] == doctest::Approx(1.0));
  CHECK(h.u[1] == doctest::Approx(0.0));
  CHECK(h.b == doctest::Approx(0.0));
}

TEST_CASE("svm: coincident opposite-label points are infeasible") {
  const Solution sol = svm_solve_exact({{0.5, 0.5}}, {{0.5, 0.5}});
  CHECK(is_infeasible(sol));
}

TEST_CASE("svm: intersecting hulls are infeasible") {
  // negative class surrounds a positive point
  const Solution sol =
      svm_solve_exact({{0.0, 0.0}}, {{-1.0, -1.0}, {1.0, -1.0}, {0.0, 1.0}});
  CHECK(is_infeasible(sol));
}

TEST_CASE("svm: matches the subset-enumeration oracle on random separable sets") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const LabeledSet inst = separable_instance(5, 2, 0.2, seed * 7);
    const Solution fast = svm_solve_exact(inst.pos, inst.neg);
    const Solution slow = exact_svm(inst.pos, inst.neg);
    REQUIRE_FALSE(is_infeasible(fast));
    REQUIRE_FALSE(is_infeasible(slow));
    const auto& hf = std::get<Hyperplane>(fast);
    const auto& hs = std::get<Hyperplane>(slow);
    CHECK(norm2(hf.u) == doctest::Approx(norm2(hs.u)).epsilon(1e-8));
    // margins at least 1 everywhere
    for (const auto& p : inst.pos) CHECK(dot(hf.u, p) - hf.b >= 1.0 - 1e-9);
    for (const auto& q : inst.neg) CHECK(-(dot(hf.u, q) - hf.b) >= 1.0 - 1e-9);
  }
}

TEST_CASE("svm: single-class input yields the zero separator") {
  const Solution sol = svm_solve_exact({{0.3, 0.4}, {0.1, 0.2}}, {});
  const auto& h = std::get<Hyperplane>(sol);
  CHECK(norm2(h.u) == 0.0);
  CHECK(h.b == -1.0);
  CHECK_FALSE(svm_violates(h, std::vector<double>{0.3, 0.4}, +1));
}

TEST_CASE("svm_correct scales both u and b") {
  const Hyperplane h{{2.0, -1.0}, 0.5};
  const Hyperplane c = svm_correct(h, 0.1);
  CHECK(c.u[0] == doctest::Approx(2.4));
  CHECK(c.u[1] == doctest::Approx(-1.2));
  CHECK(c.b == doctest::Approx(0.6));
  CHECK(svm_correct(h, 0.0) == h);
}

TEST_CASE("svm plugin: corrected plane separates the original points") {
  const double eps = 0.1, gamma = 0.2;
  for (std::uint64_t seed = 2; seed <= 5; ++seed) {
    const LabeledSet inst = separable_instance(25, 2, gamma, seed * 13);
    SvmProblem problem(2, eps, gamma);
    std::vector<u128> snapped;
    auto feed = [&](const std::vector<double>& x, int label) {
      StreamEvent ev;
      ev.payload = PointRecord{x, label};
      snapped.push_back(problem.snap_event(ev));
    };
    for (const auto& p : inst.pos) feed(p, +1);
    for (const auto& q : inst.neg) feed(q, -1);
    std::sort(snapped.begin(), snapped.end());
    snapped.erase(std::unique(snapped.begin(), snapped.end()), snapped.end());

    const Solution raw = problem.solve_basis(snapped);
    REQUIRE_FALSE(is_infeasible(raw));
    const auto corrected = std::get<Hyperplane>(problem.correct_solution(raw));
    for (const auto& p : inst.pos) CHECK(dot(corrected.u, p) - corrected.b >= 1.0 - 1e-9);
    for (const auto& q : inst.neg)
      CHECK(-(dot(corrected.u, q) - corrected.b) >= 1.0 - 1e-9);

    // snapped objective within (1+2eps)^2 of the exact one
    const Solution exact = exact_svm(inst.pos, inst.neg);
    const double bound = std::pow(1.0 + 2 * eps, 2);
    CHECK(norm2(std::get<Hyperplane>(raw).u) <=
          bound * norm2(std::get<Hyperplane>(exact).u) * (1 + 1e-9));
  }
}

TEST_CASE("svm plugin: labels double the universe and violations decode them") {
  SvmProblem problem(2, 0.25, 0.4);
  StreamEvent plus, minus;
  plus.payload = PointRecord{{0.5, 0.5}, +1};
  minus.payload = PointRecord{{0.5, 0.5}, -1};
  const u128 a = problem.snap_event(plus);
  const u128 b = problem.snap_event(minus);
  CHECK(a != b);
  const auto [za, la] = problem.decode(a);
  const auto [zb, lb] = problem.decode(b);
  CHECK(la == 1);
  CHECK(lb == -1);
  CHECK(za == zb);
}
