#pragma once

#include <memory>
#include <optional>

#include "streamlp/solver.hpp"

namespace streamlp {

// Net placement discovered before solving: the center point and an upper
// bound on the furthest live distance (exact in multipass, a 2-approx
// power of two in turnstile).
struct Centering {
  std::vector<double> center;
  double r_max = 0.0;
};

// Builds the problem plugin once the net placement is known. Only radial
// (MEB-style) problems need centering; origin-anchored nets ignore it.
class ProblemFactory {
 public:
  virtual ~ProblemFactory() = default;
  virtual bool needs_centering() const { return false; }
  virtual std::unique_ptr<LpTypeProblem> create(const std::optional<Centering>& c) const = 0;
};

struct PassReport {
  int passes = 0;            // total passes over the event sequence
  int centering_passes = 0;  // init/center/radius-search passes included above
  int iterations = 0;
  int successful_iterations = 0;
  std::size_t peak_words = 0;
  std::uint64_t sample_size_m = 0;
};

struct RunResult {
  Solution solution;
  Solution pre_correction;
  PassReport report;
};

// Multipass streaming: insert-only. Pass 1 fixes the net center at the
// first point and r_max at the exact maximum distance; each solver
// iteration then costs two passes (sample + check).
RunResult run_multipass(const PassSource& src, const ProblemFactory& factory,
                        const SolverParams& params);

// One pass: l0-samples a live (non-deleted) point over the raw coordinate
// universe. The sampled point anchors the turnstile net.
std::vector<double> find_center_turnstile(const PassSource& src, std::uint64_t seed);

// Binary search over powers of two for the largest threshold with a live
// point beyond it; returns r_max = 2^{j*+1} in [D, 2D] for live max
// distance D (0 when every live point equals the center). max_abs_coord
// bounds the search range. passes_used reports the probe count.
double approx_max_norm(const PassSource& src, const std::vector<double>& center,
                       double max_abs_coord, std::uint64_t seed, int* passes_used = nullptr);

// How the turnstile radius search spends its passes. SingleShotLogDelta is
// the two-pass variant that keeps one sampler per power of two (log(Delta)
// space instead of log log passes); it is a declared knob only and not
// implemented.
enum class CenteringStrategy { BinarySearch, SingleShotLogDelta };

// Strict turnstile: inserts and deletes, nonnegative net counts at end of
// stream (validated when the backend is ExactOracle). Radial problems run
// the sampling-based centering unless centering_override pins the net, at
// which point the run is bit-comparable with a multipass run over the same
// live support.
RunResult run_turnstile(const PassSource& src, const ProblemFactory& factory,
                        const SolverParams& params,
                        const std::optional<Centering>& centering_override = std::nullopt,
                        CenteringStrategy strategy = CenteringStrategy::BinarySearch);

// Factories for the shipped problems.
class MebFactory : public ProblemFactory {
 public:
  MebFactory(int d, double eps) : d_(d), eps_(eps) {}
  bool needs_centering() const override { return true; }
  std::unique_ptr<LpTypeProblem> create(const std::optional<Centering>& c) const override;

 private:
  int d_;
  double eps_;
};

class SvmFactory : public ProblemFactory {
 public:
  SvmFactory(int d, double eps, double gamma) : d_(d), eps_(eps), gamma_(gamma) {}
  std::unique_ptr<LpTypeProblem> create(const std::optional<Centering>&) const override;

 private:
  int d_;
  double eps_;
  double gamma_;
};

class LpFactory : public ProblemFactory {
 public:
  LpFactory(int d, double eps, std::vector<double> objective, double x_bound = 1.0)
      : d_(d), eps_(eps), objective_(std::move(objective)), x_bound_(x_bound) {}
  std::unique_ptr<LpTypeProblem> create(const std::optional<Centering>&) const override;

 private:
  int d_;
  double eps_;
  std::vector<double> objective_;
  double x_bound_;
};

class ClassifyFactory : public ProblemFactory {
 public:
  ClassifyFactory(int d, double eps) : d_(d), eps_(eps) {}
  std::unique_ptr<LpTypeProblem> create(const std::optional<Centering>&) const override;

 private:
  int d_;
  double eps_;
};

class SdpFactory : public ProblemFactory {
 public:
  SdpFactory(int d, double eps, int sparsity, double frobenius,
             std::vector<SdpEntry> objective, bool margin)
      : d_(d), eps_(eps), sparsity_(sparsity), frobenius_(frobenius),
        objective_(std::move(objective)), margin_(margin) {}
  std::unique_ptr<LpTypeProblem> create(const std::optional<Centering>&) const override;

 private:
  int d_;
  double eps_;
  int sparsity_;
  double frobenius_;
  std::vector<SdpEntry> objective_;
  bool margin_;
};

}  // namespace streamlp
