#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamlp {

// Universe indices can exceed 64 bits for fine nets in higher dimension;
// all index arithmetic is done in 128 bits and overflow-checked.
using u128 = unsigned __int128;

std::string to_string(u128 v);

// Throws UsageError on overflow.
u128 checked_mul(u128 a, u128 b);
u128 checked_pow(u128 base, int exp);

inline long double log_u128(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  if (hi == 0) return std::log(static_cast<long double>(lo));
  return std::log(static_cast<long double>(hi) * 18446744073709551616.0L +
                  static_cast<long double>(lo));
}

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (bad index, mismatched configs, bad flag).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input point falls outside the configured net / declared domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Declared norm/sparsity bounds violated at ingest.
class InputBoundsError : public Error {
 public:
  using Error::Error;
};

// Distributed protocol invariant broken (quota/batch mismatch).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class IterationBudgetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// ---------------------------------------------------------------------------
// Deterministic RNG. std distributions are not bit-stable across standard
// libraries, so sampling primitives are hand-rolled on top of splitmix64.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + mix64(b)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw UsageError("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  u128 below_u128(u128 n) {
    if (n == 0) throw UsageError("Rng::below_u128(0)");
    if (n <= UINT64_MAX) return below(static_cast<std::uint64_t>(n));
    const u128 limit = ~u128(0) - ~u128(0) % n;
    u128 v;
    do {
      v = (u128(next_u64()) << 64) | next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Index drawn proportionally to nonnegative weights (linear CDF scan).
  std::size_t pick_weighted(const std::vector<long double>& weights);

 private:
  std::uint64_t state_;
};

}  // namespace streamlp
