#include <doctest.h>

#include "streamlp/report.hpp"

using namespace streamlp;

TEST_CASE("round_sig keeps 12 significant digits") {
  CHECK(round_sig(1.0 / 3.0) == doctest::Approx(0.333333333333).epsilon(1e-12));
  CHECK(round_sig(0.0) == 0.0);
  CHECK(round_sig(-123456.789123456789) == doctest::Approx(-123456.789123));
}

TEST_CASE("solution serialization covers every kind") {
  CHECK(solution_to_json(Ball{{1, 2}, 3})["kind"] == "ball");
  CHECK(solution_to_json(Hyperplane{{1}, 2})["kind"] == "hyperplane");
  CHECK(solution_to_json(Infeasible{})["kind"] == "infeasible");
  CHECK(solution_to_json(LpPoint{{0.5}})["kind"] == "lp_point");
  SdpMatrix m;
  m.d = 2;
  m.entries = {1, 0, 0, 0};
  m.margin = 0.25;
  const auto j = solution_to_json(m);
  CHECK(j["kind"] == "sdp_matrix");
  CHECK(j["margin"] == 0.25);
}

TEST_CASE("reports are deterministic and parse under their own schema") {
  RunConfigEcho echo;
  echo.problem = "meb";
  echo.model = "multipass";
  echo.eps = 0.1;
  echo.seed = 42;
  echo.backend = "exact";
  echo.input = "points.stream";
  PassReport passes;
  passes.passes = 5;
  passes.centering_passes = 1;
  passes.iterations = 2;
  passes.successful_iterations = 2;
  passes.peak_words = 123;
  passes.sample_size_m = 999;
  const Solution sol = Ball{{0.1, 0.2}, 1.0 / 3.0};
  const auto a = make_report(echo, sol, sol, &passes, nullptr);
  const auto b = make_report(echo, sol, sol, &passes, nullptr);
  CHECK(report_to_string(a) == report_to_string(b));

  const auto parsed = nlohmann::json::parse(report_to_string(a));
  CHECK(parsed == a);
  CHECK(parsed["config"]["seed"] == 42);
  CHECK(parsed["passes"] == 5);
  CHECK(parsed["solution"]["kind"] == "ball");
  CHECK(parsed["status"] == "solved");
}
