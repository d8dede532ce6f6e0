#include <benchmark/benchmark.h>

#include <cmath>

#include "streamlp/problems/meb.hpp"
#include "streamlp/sketch.hpp"
#include "streamlp/streams.hpp"

using namespace streamlp;

namespace {

std::vector<StreamEvent> instance(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<StreamEvent> events;
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(d);
    for (double& x : p) x = std::floor(rng.next_double() * 2001) - 1000;
    StreamEvent ev;
    ev.payload = PointRecord{std::move(p), 0};
    events.push_back(ev);
  }
  return events;
}

void SketchUpdateExact(benchmark::State& state) {
  SketchConfig cfg;
  cfg.universe_size = u128(1) << 40;
  cfg.seed = 1;
  L0Estimator est(cfg);
  Rng rng(2);
  for (auto _ : state) {
    est.update(rng.below(std::uint64_t(1) << 40), +1);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(SketchUpdateExact);

void SketchUpdateRandomized(benchmark::State& state) {
  SketchConfig cfg;
  cfg.universe_size = u128(1) << 20;
  cfg.zeta = 0.25;
  cfg.delta = 0.05;
  cfg.seed = 1;
  cfg.backend = SketchBackend::Randomized;
  L0Estimator est(cfg);
  Rng rng(2);
  for (auto _ : state) {
    est.update(rng.below(1 << 20), +1);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(SketchUpdateRandomized);

void NetSnap(benchmark::State& state) {
  NetConfig cfg;
  cfg.d = static_cast<int>(state.range(0));
  cfg.eps = 0.1;
  cfg.radial = true;
  cfg.r_max = 4000.0;
  Rng rng(3);
  std::vector<double> p(cfg.d);
  for (auto _ : state) {
    for (double& x : p) x = std::floor(rng.next_double() * 2001) - 1000;
    benchmark::DoNotOptimize(flat_index(snap(p, cfg), cfg));
  }
}
BENCHMARK(NetSnap)->Arg(2)->Arg(3)->Arg(5);

void WelzlMeb(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::vector<double>> pts;
  Rng rng(4);
  for (int i = 0; i < n; ++i)
    pts.push_back({rng.next_double() * 100, rng.next_double() * 100, rng.next_double() * 100});
  for (auto _ : state) benchmark::DoNotOptimize(welzl_meb(pts));
  state.SetComplexityN(n);
}
BENCHMARK(WelzlMeb)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void MultipassMebSolve(benchmark::State& state) {
  const auto events = instance(static_cast<int>(state.range(0)), 2, 5);
  const PassSource src((std::vector<StreamEvent>(events)));
  const MebFactory factory(2, 0.2);
  SolverParams params;
  params.seed = 6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_multipass(src, factory, params));
  }
}
BENCHMARK(MultipassMebSolve)->Arg(200)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
