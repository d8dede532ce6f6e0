#pragma once

#include <cstdint>
#include <vector>

#include "streamlp/problem.hpp"
#include "streamlp/sketch.hpp"

namespace streamlp {

// Parameters of the sampling loop. mu and m are always recomputed from the
// current universe size, never cached.
struct SolverParams {
  double eps = 0.1;
  int s = 0;  // 0 = default ceil(ln N); valid range [1, max(1, ceil(ln N))]
  std::uint64_t seed = 0;
  SketchBackend backend = SketchBackend::ExactOracle;
  // Randomized profile for the sampling-pass sketches; the violation-check
  // banks are pinned at zeta = 1/4 regardless.
  double sketch_zeta = 0.25;
  double sketch_delta = 0.01;
  int max_iteration_factor = 20;  // cap = factor * nu * s

  int resolved_s(u128 universe_size) const;
  long double weight_base(u128 universe_size, int s_val) const;  // N^{1/s}
  double mu(const LpTypeProblem& problem, int s_val) const;
  std::uint64_t sample_count(const LpTypeProblem& problem, int s_val) const;  // m
  int max_iterations(const LpTypeProblem& problem, int s_val) const;
};

// Outcome of one violation-check pass (two estimator banks at zeta = 1/4).
struct CheckResult {
  bool success = false;          // scaled violator weight <= mu * scaled total
  bool violators_empty = false;  // termination signal
  long double violator_weight = 0.0L;  // estimate, in units of N^{v_max/s}
  long double total_weight = 0.0L;
};

struct SolveResult {
  Solution solution;         // after correct_solution
  Solution pre_correction;   // the final f(B)
  int iterations = 0;
  int successful_iterations = 0;
  std::size_t peak_words = 0;
  std::uint64_t sample_size_m = 0;
};

// Per-weight-class estimator/sampler pairs filled by one pass over a
// source. Machines in the distributed models build the same banks over
// their partitions with the same derived seeds, which keeps a k=1
// coordinator run bit-identical to a multipass run.
struct SamplingBank {
  std::vector<L0Estimator> estimators;
  std::vector<L0Sampler> samplers;
  std::vector<std::uint64_t> counts;  // l0 estimates per class
  std::size_t words() const;
  bool all_empty() const;
};

SamplingBank build_sampling_bank(const PassSource& src, const LpTypeProblem& problem,
                                 const WeightOracle& oracle, const SolverParams& params,
                                 int iteration);

// count weighted draws from the bank (class picked proportionally to
// f_i N^{i/s}, then one support sample); failed randomized recoveries are
// skipped. Returns the drawn indices with duplicates.
std::vector<u128> draw_from_bank(SamplingBank& bank, long double weight_base,
                                 std::uint64_t count, Rng& rng);

// One pass: feeds every snapped point into the estimator/sampler pair of
// its weight class, then draws m points with class probability
// f_i N^{i/s} / sum_j f_j N^{j/s} and one support sample per draw.
// Returns the de-duplicated sample B. Throws EmptyInputError when every
// class is empty. rng_machine_tag keeps draw streams aligned between the
// single-machine and distributed paths.
std::vector<u128> sample_m_points(const PassSource& src, const LpTypeProblem& problem,
                                  const WeightOracle& oracle, const SolverParams& params,
                                  int iteration, std::size_t* words_out = nullptr,
                                  int rng_machine_tag = 0);

// Per-class counts from the two zeta=1/4 banks of one violation-check pass.
struct CheckCounts {
  std::vector<std::uint64_t> all;
  std::vector<std::uint64_t> violators;
  std::size_t words = 0;
};

CheckCounts build_check_counts(const PassSource& src, const LpTypeProblem& problem,
                               const WeightOracle& oracle, const SolverParams& params,
                               int iteration, const Solution& candidate);

// The Algorithm-3 return inequality over (possibly machine-summed) counts.
CheckResult evaluate_check(const CheckCounts& counts, long double weight_base, double mu);

CheckResult check_violators_weight(const PassSource& src, const LpTypeProblem& problem,
                                   const WeightOracle& oracle, const SolverParams& params,
                                   int iteration, const Solution& candidate,
                                   std::size_t* words_out = nullptr);

// The main loop: sample, solve the basis, check violators; on a successful
// iteration with violators the candidate joins the weight oracle; on an
// empty violator set the corrected solution is returned.
SolveResult solve(const PassSource& src, const LpTypeProblem& problem,
                  const SolverParams& params);

// Seed derivation for per-iteration sketches and draw streams. Shared by
// the streaming and distributed paths so that a k=1 coordinator run matches
// a multipass run bit for bit.
enum class SeedChannel : std::uint64_t {
  SampleSketch = 1,
  CheckAllSketch = 2,
  CheckViolatorSketch = 3,
  Draws = 4,
  Quotas = 5,
  Center = 6,
};
std::uint64_t derive_seed(std::uint64_t master, SeedChannel channel, std::uint64_t iteration,
                          std::uint64_t lane);

}  // namespace streamlp
