#include "streamlp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace streamlp {

std::uint64_t derive_seed(std::uint64_t master, SeedChannel channel, std::uint64_t iteration,
                          std::uint64_t lane) {
  return mix64(mix64(mix64(master, static_cast<std::uint64_t>(channel)), iteration), lane);
}

int SolverParams::resolved_s(u128 universe_size) const {
  const int s_max = std::max(1, static_cast<int>(std::ceil(log_u128(universe_size))));
  if (s == 0) return s_max;
  if (s < 1 || s > s_max)
    throw UsageError("s must lie in [1, ceil(ln N)] = [1, " + std::to_string(s_max) + "]");
  return s;
}

long double SolverParams::weight_base(u128 universe_size, int s_val) const {
  return std::exp(log_u128(universe_size) / static_cast<long double>(s_val));
}

double SolverParams::mu(const LpTypeProblem& problem, int s_val) const {
  const long double base = weight_base(problem.universe_size(), s_val);
  return static_cast<double>(1.0L / (10.0L * problem.nu() * base));
}

std::uint64_t SolverParams::sample_count(const LpTypeProblem& problem, int s_val) const {
  const double mu_v = mu(problem, s_val);
  const double a = 8.0 * problem.lambda() / mu_v;
  const double m = std::max(a * std::log(a), (4.0 / mu_v) * std::log(8.0));
  return static_cast<std::uint64_t>(std::ceil(m));
}

int SolverParams::max_iterations(const LpTypeProblem& problem, int s_val) const {
  return max_iteration_factor * problem.nu() * s_val;
}

namespace {

SketchConfig sketch_config(const SolverParams& params, u128 universe, std::uint64_t seed,
                           double zeta) {
  SketchConfig cfg;
  cfg.universe_size = universe;
  cfg.zeta = zeta;
  cfg.delta = params.sketch_delta;
  cfg.seed = seed;
  cfg.backend = params.backend;
  cfg.sampler_draws = 256;
  return cfg;
}

// Class weights f_i * N^{i/s}, scaled by N^{-(classes-1)/s} so they stay in
// long-double range for any iteration count.
std::vector<long double> scaled_class_weights(const std::vector<std::uint64_t>& counts,
                                              long double base) {
  const int classes = static_cast<int>(counts.size());
  std::vector<long double> w(classes);
  for (int i = 0; i < classes; ++i)
    w[i] = static_cast<long double>(counts[i]) *
           std::pow(base, static_cast<long double>(i - (classes - 1)));
  return w;
}

}  // namespace

std::size_t SamplingBank::words() const {
  std::size_t w = 0;
  for (const auto& e : estimators) w += e.words();
  for (const auto& s : samplers) w += s.words();
  return w;
}

bool SamplingBank::all_empty() const {
  for (std::uint64_t c : counts)
    if (c > 0) return false;
  return true;
}

SamplingBank build_sampling_bank(const PassSource& src, const LpTypeProblem& problem,
                                 const WeightOracle& oracle, const SolverParams& params,
                                 int iteration) {
  const u128 universe = problem.universe_size();
  const int classes = oracle.stored_count() + 1;

  SamplingBank bank;
  bank.estimators.reserve(classes);
  bank.samplers.reserve(classes);
  for (int c = 0; c < classes; ++c) {
    bank.estimators.emplace_back(sketch_config(
        params, universe, derive_seed(params.seed, SeedChannel::SampleSketch, iteration, c),
        params.sketch_zeta));
    bank.samplers.emplace_back(sketch_config(
        params, universe,
        derive_seed(params.seed, SeedChannel::SampleSketch, iteration, classes + c),
        params.sketch_zeta));
  }

  src.scan([&](const StreamEvent& ev) {
    const u128 idx = problem.snap_event(ev);
    const int v = oracle.weight_exponent(idx);
    bank.estimators[v].update(idx, ev.delta());
    bank.samplers[v].update(idx, ev.delta());
  });

  bank.counts.resize(classes);
  for (int c = 0; c < classes; ++c) bank.counts[c] = bank.estimators[c].estimate();
  return bank;
}

std::vector<u128> draw_from_bank(SamplingBank& bank, long double weight_base,
                                 std::uint64_t count, Rng& rng) {
  const std::vector<long double> weights = scaled_class_weights(bank.counts, weight_base);
  std::vector<u128> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t cls = rng.pick_weighted(weights);
    if (auto idx = bank.samplers[cls].sample()) out.push_back(*idx);
  }
  return out;
}

std::vector<u128> sample_m_points(const PassSource& src, const LpTypeProblem& problem,
                                  const WeightOracle& oracle, const SolverParams& params,
                                  int iteration, std::size_t* words_out,
                                  int rng_machine_tag) {
  const u128 universe = problem.universe_size();
  const int s_val = params.resolved_s(universe);
  const long double base = params.weight_base(universe, s_val);
  const std::uint64_t m = params.sample_count(problem, s_val);

  SamplingBank bank = build_sampling_bank(src, problem, oracle, params, iteration);
  if (bank.all_empty())
    throw EmptyInputError("sample_m_points: no snapped points in any weight class");

  Rng rng(derive_seed(params.seed, SeedChannel::Draws, iteration, rng_machine_tag));
  const std::vector<u128> draws = draw_from_bank(bank, base, m, rng);
  const std::set<u128> dedup(draws.begin(), draws.end());

  if (words_out) *words_out = bank.words() + dedup.size();
  return std::vector<u128>(dedup.begin(), dedup.end());
}

CheckCounts build_check_counts(const PassSource& src, const LpTypeProblem& problem,
                               const WeightOracle& oracle, const SolverParams& params,
                               int iteration, const Solution& candidate) {
  const u128 universe = problem.universe_size();
  const int classes = oracle.stored_count() + 1;

  // Both banks run at zeta = 1/4; the success inequality compensates with
  // the 1/(1+1/4) and 1/(1-1/4) factors.
  std::vector<L0Estimator> all_bank;
  std::vector<L0Estimator> violator_bank;
  all_bank.reserve(classes);
  violator_bank.reserve(classes);
  for (int c = 0; c < classes; ++c) {
    all_bank.emplace_back(sketch_config(
        params, universe, derive_seed(params.seed, SeedChannel::CheckAllSketch, iteration, c),
        0.25));
    violator_bank.emplace_back(sketch_config(
        params, universe,
        derive_seed(params.seed, SeedChannel::CheckViolatorSketch, iteration, c), 0.25));
  }

  src.scan([&](const StreamEvent& ev) {
    const u128 idx = problem.snap_event(ev);
    const int v = oracle.weight_exponent(idx);
    all_bank[v].update(idx, ev.delta());
    if (problem.violates(candidate, idx)) violator_bank[v].update(idx, ev.delta());
  });

  CheckCounts out;
  out.all.resize(classes);
  out.violators.resize(classes);
  for (int c = 0; c < classes; ++c) {
    out.all[c] = all_bank[c].estimate();
    out.violators[c] = violator_bank[c].estimate();
    out.words += all_bank[c].words() + violator_bank[c].words();
  }
  return out;
}

CheckResult evaluate_check(const CheckCounts& counts, long double weight_base, double mu) {
  const auto all_w = scaled_class_weights(counts.all, weight_base);
  const auto violator_w = scaled_class_weights(counts.violators, weight_base);
  long double total = 0.0L, viol = 0.0L;
  std::uint64_t violator_support = 0;
  for (std::size_t c = 0; c < all_w.size(); ++c) {
    total += all_w[c];
    viol += violator_w[c];
    violator_support += counts.violators[c];
  }
  CheckResult out;
  out.total_weight = total;
  out.violator_weight = viol;
  out.violators_empty = violator_support == 0;
  out.success =
      (1.0L / 1.25L) * viol <= static_cast<long double>(mu) * (1.0L / 0.75L) * total;
  return out;
}

CheckResult check_violators_weight(const PassSource& src, const LpTypeProblem& problem,
                                   const WeightOracle& oracle, const SolverParams& params,
                                   int iteration, const Solution& candidate,
                                   std::size_t* words_out) {
  const u128 universe = problem.universe_size();
  const int s_val = params.resolved_s(universe);
  const CheckCounts counts =
      build_check_counts(src, problem, oracle, params, iteration, candidate);
  if (words_out) *words_out = counts.words;
  return evaluate_check(counts, params.weight_base(universe, s_val),
                        params.mu(problem, s_val));
}

SolveResult solve(const PassSource& src, const LpTypeProblem& problem,
                  const SolverParams& params) {
  if (src.empty()) throw EmptyInputError("solve: empty event stream");
  const int s_val = params.resolved_s(problem.universe_size());
  const int budget = params.max_iterations(problem, s_val);

  WeightOracle oracle(problem);
  SolveResult result;
  result.sample_size_m = params.sample_count(problem, s_val);

  for (int it = 0; it < budget; ++it) {
    std::size_t sample_words = 0, check_words = 0;
    const std::vector<u128> basis =
        sample_m_points(src, problem, oracle, params, it, &sample_words);
    const Solution candidate = problem.solve_basis(basis);
    const CheckResult chk =
        check_violators_weight(src, problem, oracle, params, it, candidate, &check_words);

    std::size_t stored_words = 0;
    for (const Solution& sol : oracle.stored()) stored_words += solution_words(sol);
    result.peak_words =
        std::max(result.peak_words, sample_words + check_words + basis.size() + stored_words);
    result.iterations = it + 1;
    if (chk.success) ++result.successful_iterations;

    if (chk.violators_empty) {
      result.pre_correction = candidate;
      result.solution = problem.correct_solution(candidate);
      return result;
    }
    if (chk.success) oracle.record_success(candidate);
  }

  if (problem.infeasible_on_budget()) {
    result.iterations = budget;
    result.pre_correction = Infeasible{};
    result.solution = Infeasible{};
    return result;
  }
  throw IterationBudgetError("solve: iteration budget (" + std::to_string(budget) +
                             ") exhausted without an empty violator set");
}

}  // namespace streamlp
