#include "streamlp/streams.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "streamlp/problems/lp.hpp"
#include "streamlp/problems/meb.hpp"
#include "streamlp/problems/sdp.hpp"
#include "streamlp/problems/svm.hpp"
#include "streamlp/sketch.hpp"

namespace streamlp {

namespace {

std::uint64_t hash_point(const std::vector<double>& p) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (double v : p) {
    if (v == 0.0) v = 0.0;  // normalize -0.0
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h = mix64(h, bits);
  }
  return h;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Strict-turnstile validation by counter-map replay; only meaningful (and
// only run) in exact mode, where it costs nothing extra beyond the pass it
// piggybacks on.
struct StreamScan {
  std::map<std::vector<double>, long long> counts;  // point payloads
  std::map<std::string, long long> sdp_counts;      // serialized sdp rows
  std::optional<std::vector<double>> first_point;
  double max_abs_coord = 0.0;
  std::size_t events = 0;

  void feed(const StreamEvent& ev) {
    ++events;
    if (std::holds_alternative<PointRecord>(ev.payload)) {
      const auto& rec = ev.point();
      std::vector<double> key = rec.coords;
      key.push_back(rec.label);
      counts[key] += ev.delta();
      if (!first_point && ev.op == StreamEvent::Op::Insert) first_point = rec.coords;
      for (double v : rec.coords) max_abs_coord = std::max(max_abs_coord, std::abs(v));
    } else {
      const auto& row = ev.sdp();
      std::string key;
      for (const auto& e : row.entries)
        key += std::to_string(e.row) + "," + std::to_string(e.col) + "," +
               std::to_string(e.value) + ";";
      key += "|" + std::to_string(row.rhs);
      sdp_counts[key] += ev.delta();
    }
  }

  void require_nonnegative() const {
    for (const auto& [k, v] : counts)
      if (v < 0) throw UsageError("stream is not strict-turnstile: negative final count");
    for (const auto& [k, v] : sdp_counts)
      if (v < 0) throw UsageError("stream is not strict-turnstile: negative final count");
  }
};

}  // namespace

RunResult run_multipass(const PassSource& src, const ProblemFactory& factory,
                        const SolverParams& params) {
  if (src.empty()) throw EmptyInputError("run_multipass: empty stream");
  src.reset_pass_counter();

  // Pass 1: origin + exact max distance (and input validation).
  StreamScan scan;
  std::optional<Centering> centering;
  if (factory.needs_centering()) {
    std::vector<double> center;
    double r_max = 0.0;
    src.scan([&](const StreamEvent& ev) {
      if (ev.op == StreamEvent::Op::Delete)
        throw UsageError("run_multipass: deletions require the turnstile model");
      scan.feed(ev);
      if (center.empty()) center = ev.point().coords;
      r_max = std::max(r_max, dist(center, ev.point().coords));
    });
    centering = Centering{std::move(center), r_max};
  } else {
    src.scan([&](const StreamEvent& ev) {
      if (ev.op == StreamEvent::Op::Delete)
        throw UsageError("run_multipass: deletions require the turnstile model");
      scan.feed(ev);
    });
  }

  const auto problem = factory.create(centering);
  const SolveResult res = solve(src, *problem, params);

  RunResult out;
  out.solution = res.solution;
  out.pre_correction = res.pre_correction;
  out.report.passes = src.passes();
  out.report.centering_passes = 1;
  out.report.iterations = res.iterations;
  out.report.successful_iterations = res.successful_iterations;
  out.report.peak_words = res.peak_words;
  out.report.sample_size_m = res.sample_size_m;
  return out;
}

std::vector<double> find_center_turnstile(const PassSource& src, std::uint64_t seed) {
  SketchConfig cfg;
  cfg.universe_size = ~u128(0);
  cfg.seed = seed;
  cfg.backend = SketchBackend::ExactOracle;
  L0Sampler sampler(cfg);
  // The raw-coordinate universe is addressed through a 64-bit hash; the
  // dictionary inverts it for the sampled index. Collisions are ignored.
  std::map<std::uint64_t, std::vector<double>> dictionary;
  src.scan([&](const StreamEvent& ev) {
    const std::uint64_t h = hash_point(ev.point().coords);
    dictionary.emplace(h, ev.point().coords);
    sampler.update(h, ev.delta());
  });
  const auto picked = sampler.sample();
  if (!picked) throw EmptyInputError("find_center_turnstile: no live points");
  return dictionary.at(static_cast<std::uint64_t>(*picked));
}

double approx_max_norm(const PassSource& src, const std::vector<double>& center,
                       double max_abs_coord, std::uint64_t seed, int* passes_used) {
  const double hi_norm =
      2.0 * std::max(1.0, max_abs_coord) * std::sqrt(double(center.size()));
  const int j_max = static_cast<int>(std::ceil(std::log2(hi_norm)));

  int probes = 0;
  auto beyond = [&](int j) {
    ++probes;
    const double threshold = std::ldexp(1.0, j);
    SketchConfig cfg;
    cfg.universe_size = ~u128(0);
    cfg.seed = mix64(seed, static_cast<std::uint64_t>(j + 64));
    cfg.backend = SketchBackend::ExactOracle;
    L0Sampler sampler(cfg);
    src.scan([&](const StreamEvent& ev) {
      if (dist(center, ev.point().coords) > threshold)
        sampler.update(hash_point(ev.point().coords), ev.delta());
    });
    return sampler.sample().has_value();
  };

  // lo = -2 is a virtual floor: "no live point beyond 2^-1" means every
  // live point sits on the center (integer coordinates). hi = j_max is
  // known-empty by the coordinate bound.
  int lo = -2, hi = j_max;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (beyond(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (passes_used) *passes_used = probes;
  return lo == -2 ? 0.0 : std::ldexp(1.0, lo + 1);
}

RunResult run_turnstile(const PassSource& src, const ProblemFactory& factory,
                        const SolverParams& params,
                        const std::optional<Centering>& centering_override,
                        CenteringStrategy strategy) {
  if (strategy == CenteringStrategy::SingleShotLogDelta)
    throw UsageError("run_turnstile: the single-shot log(Delta)-space centering is not implemented");
  if (src.empty()) throw EmptyInputError("run_turnstile: empty stream");
  src.reset_pass_counter();

  std::optional<Centering> centering = centering_override;
  int centering_passes = 0;
  StreamScan scan;

  if (factory.needs_centering() && !centering) {
    // Center pass: l0-sample a live point; validation piggybacks.
    SketchConfig cfg;
    cfg.universe_size = ~u128(0);
    cfg.seed = derive_seed(params.seed, SeedChannel::Center, 0, 0);
    cfg.backend = SketchBackend::ExactOracle;
    L0Sampler sampler(cfg);
    std::map<std::uint64_t, std::vector<double>> dictionary;
    src.scan([&](const StreamEvent& ev) {
      scan.feed(ev);
      const std::uint64_t h = hash_point(ev.point().coords);
      dictionary.emplace(h, ev.point().coords);
      sampler.update(h, ev.delta());
    });
    if (params.backend == SketchBackend::ExactOracle) scan.require_nonnegative();
    const auto picked = sampler.sample();
    if (!picked) throw EmptyInputError("run_turnstile: no live points");
    const std::vector<double> center = dictionary.at(static_cast<std::uint64_t>(*picked));

    int search_passes = 0;
    const double r_max =
        approx_max_norm(src, center, scan.max_abs_coord,
                        derive_seed(params.seed, SeedChannel::Center, 1, 0), &search_passes);
    centering = Centering{center, r_max};
    centering_passes = 1 + search_passes;
  } else {
    // Validation/ingest pass only.
    src.scan([&](const StreamEvent& ev) { scan.feed(ev); });
    if (params.backend == SketchBackend::ExactOracle) scan.require_nonnegative();
    centering_passes = 1;
    if (factory.needs_centering() && centering_override) centering = centering_override;
  }

  const auto problem = factory.create(factory.needs_centering() ? centering : std::nullopt);
  const SolveResult res = solve(src, *problem, params);

  RunResult out;
  out.solution = res.solution;
  out.pre_correction = res.pre_correction;
  out.report.passes = src.passes();
  out.report.centering_passes = centering_passes;
  out.report.iterations = res.iterations;
  out.report.successful_iterations = res.successful_iterations;
  out.report.peak_words = res.peak_words;
  out.report.sample_size_m = res.sample_size_m;
  return out;
}

std::unique_ptr<LpTypeProblem> MebFactory::create(const std::optional<Centering>& c) const {
  if (!c) throw UsageError("meb: centering required");
  NetConfig cfg;
  cfg.d = d_;
  cfg.eps = eps_;
  cfg.center = c->center;
  cfg.r_max = c->r_max;
  cfg.radial = true;
  return std::make_unique<MebProblem>(std::move(cfg), eps_);
}

std::unique_ptr<LpTypeProblem> SvmFactory::create(const std::optional<Centering>&) const {
  return std::make_unique<SvmProblem>(d_, eps_, gamma_);
}

std::unique_ptr<LpTypeProblem> LpFactory::create(const std::optional<Centering>&) const {
  return std::make_unique<BoundedLpProblem>(d_, eps_, objective_, x_bound_);
}

std::unique_ptr<LpTypeProblem> ClassifyFactory::create(const std::optional<Centering>&) const {
  return std::make_unique<BoundedLpProblem>(classification_to_lp(d_, eps_));
}

std::unique_ptr<LpTypeProblem> SdpFactory::create(const std::optional<Centering>&) const {
  return std::make_unique<BoundedSdpProblem>(d_, eps_, sparsity_, frobenius_, objective_,
                                             margin_);
}

}  // namespace streamlp
