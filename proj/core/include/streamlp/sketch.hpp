#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "streamlp/common.hpp"

namespace streamlp {

// Mergeable linear sketches over an index universe of size N, supporting
// +1/-1 updates. Two backends:
//   ExactOracle -- a sparse counter map; exact and deterministic. Used for
//                  algorithmic correctness runs.
//   Randomized  -- pairwise-independent hashing with geometric level
//                  sub-sampling and small sparse-recovery cells per level.
//                  Meets the (1 +- zeta, delta) estimate contract and the
//                  (uniform +- delta) sample contract.
//
// Queries issued while some net count is negative are undefined behavior;
// strict turnstile guarantees nonnegativity only at query time.
// Sketches are single-writer objects; merge() is a pure function.

enum class SketchBackend { ExactOracle, Randomized };

struct SketchConfig {
  u128 universe_size = 1;
  double zeta = 0.25;   // relative accuracy of l0 estimates
  double delta = 0.05;  // failure probability
  std::uint64_t seed = 0;
  SketchBackend backend = SketchBackend::ExactOracle;
  int sampler_draws = 64;  // independent sample groups (Randomized sampler)

  bool operator==(const SketchConfig&) const = default;
  void validate() const;
};

class L0Estimator {
 public:
  explicit L0Estimator(const SketchConfig& cfg);

  void update(u128 index, std::int64_t delta);

  // With probability >= 1-delta the result lies in (1 +- zeta) * l0(v).
  // ExactOracle returns l0(v) exactly.
  std::uint64_t estimate() const;

  const SketchConfig& config() const { return cfg_; }
  std::size_t words() const;

  // Compares linear state only (not query-side cursors).
  bool operator==(const L0Estimator& other) const;

  friend L0Estimator merge(const L0Estimator& a, const L0Estimator& b);

 private:
  struct Cell {
    std::int64_t count = 0;
    std::uint64_t fp = 0;
    bool operator==(const Cell&) const = default;
  };

  bool empty_cell(const Cell& c) const { return c.count == 0 && c.fp == 0; }
  Cell& cell(int rep, int level, int bucket);
  const Cell& cell(int rep, int level, int bucket) const;
  long double estimate_rep(int rep) const;

  SketchConfig cfg_;
  // ExactOracle
  std::map<u128, std::int64_t> counts_;
  // Randomized
  int levels_ = 0;
  int reps_ = 0;
  int buckets_ = 0;
  std::vector<Cell> cells_;
};

class L0Sampler {
 public:
  explicit L0Sampler(const SketchConfig& cfg);

  void update(u128 index, std::int64_t delta);

  // Returns a support index (near-uniform), or nullopt when the support is
  // empty / the randomized recovery failed. ExactOracle draws exactly
  // uniformly from its own seeded RNG; repeated calls give fresh draws.
  // Randomized consumes one independent sample group per call and wraps
  // around once all groups are spent.
  std::optional<u128> sample();

  const SketchConfig& config() const { return cfg_; }
  std::size_t words() const;

  bool operator==(const L0Sampler& other) const;

  friend L0Sampler merge(const L0Sampler& a, const L0Sampler& b);

 private:
  struct Cell {
    std::int64_t count = 0;
    u128 index_sum = 0;  // wrapping mod 2^128; exact when 1-sparse
    std::uint64_t fp = 0;
    bool operator==(const Cell&) const = default;
  };
  static constexpr int kSubcells = 4;

  bool empty_cell(const Cell& c) const {
    return c.count == 0 && c.index_sum == 0 && c.fp == 0;
  }
  std::optional<u128> recover(int group, int level) const;
  Cell& cell(int group, int level, int sub);
  const Cell& cell(int group, int level, int sub) const;

  SketchConfig cfg_;
  // ExactOracle
  std::map<u128, std::int64_t> counts_;
  mutable std::vector<u128> support_cache_;
  mutable bool cache_valid_ = false;
  Rng draw_rng_;
  // Randomized
  int levels_ = 0;
  int groups_ = 0;
  std::vector<Cell> cells_;
  int cursor_ = 0;
};

L0Estimator merge(const L0Estimator& a, const L0Estimator& b);
L0Sampler merge(const L0Sampler& a, const L0Sampler& b);

}  // namespace streamlp
