#include "streamlp/sketch.hpp"

#include <algorithm>
#include <cmath>

namespace streamlp {

namespace {

constexpr std::uint64_t kLevelSalt = 0x1b873593a4093822ULL;
constexpr std::uint64_t kBucketSalt = 0x9d2c5680cafef00dULL;
constexpr std::uint64_t kFpSalt = 0xd699d4f1c23aa2c1ULL;
constexpr std::uint64_t kDrawSalt = 0x853c49e6748fea9bULL;

std::uint64_t fold(u128 v) {
  return static_cast<std::uint64_t>(v) ^ mix64(static_cast<std::uint64_t>(v >> 64));
}

int levels_for(u128 n) {
  int bits = 0;
  u128 v = n - 1;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return std::max(1, bits) + 1;
}

// Membership of an index at subsampling level l: l trailing zero bits of a
// per-repetition hash. Levels are nested within a repetition.
bool in_level(std::uint64_t h, int level) {
  if (level >= 64) return h == 0;
  return (h & ((std::uint64_t(1) << level) - 1)) == 0;
}

}  // namespace

void SketchConfig::validate() const {
  if (universe_size < 1) throw UsageError("sketch: universe_size must be >= 1");
  if (!(zeta > 0.0 && zeta < 1.0)) throw UsageError("sketch: zeta must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("sketch: delta must be in (0,1)");
  if (sampler_draws < 1) throw UsageError("sketch: sampler_draws must be >= 1");
  if (backend == SketchBackend::Randomized && (universe_size >> 64) != 0)
    throw UsageError("sketch: Randomized backend supports universes up to 2^64");
}

// ---------------------------------------------------------------------------
// L0Estimator

L0Estimator::L0Estimator(const SketchConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.backend == SketchBackend::Randomized) {
    levels_ = levels_for(cfg_.universe_size);
    // Repetition count per the estimator contract; the constant is calibrated
    // against the acceptance thresholds.
    reps_ = std::max<int>(
        8, static_cast<int>(std::ceil(0.25 * std::log(1.0 / cfg_.delta) /
                                      (cfg_.zeta * cfg_.zeta))));
    buckets_ = 32;
    cells_.assign(static_cast<std::size_t>(reps_) * levels_ * buckets_, Cell{});
  }
}

L0Estimator::Cell& L0Estimator::cell(int rep, int level, int bucket) {
  return cells_[(static_cast<std::size_t>(rep) * levels_ + level) * buckets_ + bucket];
}

const L0Estimator::Cell& L0Estimator::cell(int rep, int level, int bucket) const {
  return cells_[(static_cast<std::size_t>(rep) * levels_ + level) * buckets_ + bucket];
}

void L0Estimator::update(u128 index, std::int64_t delta) {
  if (index >= cfg_.universe_size) throw UsageError("l0_update: index out of range");
  if (delta == 0) return;
  if (cfg_.backend == SketchBackend::ExactOracle) {
    auto it = counts_.find(index);
    if (it == counts_.end()) {
      counts_.emplace(index, delta);
    } else {
      it->second += delta;
      if (it->second == 0) counts_.erase(it);
    }
    return;
  }
  const std::uint64_t key = fold(index);
  for (int r = 0; r < reps_; ++r) {
    const std::uint64_t hl = mix64(cfg_.seed ^ kLevelSalt, key ^ (std::uint64_t(r) << 32));
    const std::uint64_t hb = mix64(cfg_.seed ^ kBucketSalt, key + r);
    const int bucket = static_cast<int>(hb % buckets_);
    for (int l = 0; l < levels_; ++l) {
      if (!in_level(hl, l)) break;
      Cell& c = cell(r, l, bucket);
      c.count += delta;
      c.fp += static_cast<std::uint64_t>(delta) *
              mix64(cfg_.seed ^ kFpSalt, key ^ (std::uint64_t(r * 131 + l) << 24));
    }
  }
}

long double L0Estimator::estimate_rep(int rep) const {
  for (int l = 0; l < levels_; ++l) {
    int occupied = 0;
    for (int b = 0; b < buckets_; ++b)
      if (!empty_cell(cell(rep, l, b))) ++occupied;
    if (occupied == 0) return 0.0L;
    if (occupied <= static_cast<int>(0.7 * buckets_) || l == levels_ - 1) {
      const int capped = std::min(occupied, buckets_ - 1);
      const long double distinct =
          -static_cast<long double>(buckets_) *
          std::log(1.0L - static_cast<long double>(capped) / buckets_);
      return distinct * std::pow(2.0L, l);
    }
  }
  return 0.0L;
}

std::uint64_t L0Estimator::estimate() const {
  if (cfg_.backend == SketchBackend::ExactOracle)
    return static_cast<std::uint64_t>(counts_.size());
  std::vector<long double> per_rep(reps_);
  for (int r = 0; r < reps_; ++r) per_rep[r] = estimate_rep(r);
  std::sort(per_rep.begin(), per_rep.end());
  const long double med = (reps_ % 2 == 1)
                              ? per_rep[reps_ / 2]
                              : 0.5L * (per_rep[reps_ / 2 - 1] + per_rep[reps_ / 2]);
  return static_cast<std::uint64_t>(llroundl(med));
}

std::size_t L0Estimator::words() const {
  if (cfg_.backend == SketchBackend::ExactOracle) return 2 * counts_.size();
  return cells_.size() * 2;
}

bool L0Estimator::operator==(const L0Estimator& other) const {
  return cfg_ == other.cfg_ && counts_ == other.counts_ && cells_ == other.cells_;
}

L0Estimator merge(const L0Estimator& a, const L0Estimator& b) {
  if (!(a.cfg_ == b.cfg_)) throw UsageError("merge: sketch configs differ");
  L0Estimator out = a;
  for (const auto& [idx, cnt] : b.counts_) {
    auto it = out.counts_.find(idx);
    if (it == out.counts_.end()) {
      out.counts_.emplace(idx, cnt);
    } else {
      it->second += cnt;
      if (it->second == 0) out.counts_.erase(it);
    }
  }
  for (std::size_t i = 0; i < out.cells_.size(); ++i) {
    out.cells_[i].count += b.cells_[i].count;
    out.cells_[i].fp += b.cells_[i].fp;
  }
  return out;
}

// ---------------------------------------------------------------------------
// L0Sampler

L0Sampler::L0Sampler(const SketchConfig& cfg)
    : cfg_(cfg), draw_rng_(mix64(cfg.seed, kDrawSalt)) {
  cfg_.validate();
  if (cfg_.backend == SketchBackend::Randomized) {
    levels_ = levels_for(cfg_.universe_size);
    groups_ = cfg_.sampler_draws;
    cells_.assign(static_cast<std::size_t>(groups_) * levels_ * kSubcells, Cell{});
  }
}

L0Sampler::Cell& L0Sampler::cell(int group, int level, int sub) {
  return cells_[(static_cast<std::size_t>(group) * levels_ + level) * kSubcells + sub];
}

const L0Sampler::Cell& L0Sampler::cell(int group, int level, int sub) const {
  return cells_[(static_cast<std::size_t>(group) * levels_ + level) * kSubcells + sub];
}

void L0Sampler::update(u128 index, std::int64_t delta) {
  if (index >= cfg_.universe_size) throw UsageError("l0_update: index out of range");
  if (delta == 0) return;
  if (cfg_.backend == SketchBackend::ExactOracle) {
    auto it = counts_.find(index);
    if (it == counts_.end()) {
      counts_.emplace(index, delta);
    } else {
      it->second += delta;
      if (it->second == 0) counts_.erase(it);
    }
    cache_valid_ = false;
    return;
  }
  const std::uint64_t key = fold(index);
  for (int g = 0; g < groups_; ++g) {
    const std::uint64_t hl =
        mix64(cfg_.seed ^ kLevelSalt, key ^ (std::uint64_t(g) << 20) ^ 0x5bd1e995);
    for (int l = 0; l < levels_; ++l) {
      if (!in_level(hl, l)) break;
      const int sub = static_cast<int>(
          mix64(cfg_.seed ^ kBucketSalt, key ^ (std::uint64_t(g * 977 + l) << 16)) %
          kSubcells);
      Cell& c = cell(g, l, sub);
      c.count += delta;
      c.index_sum += static_cast<u128>(delta) * index;  // wraps mod 2^128
      c.fp += static_cast<std::uint64_t>(delta) *
              mix64(cfg_.seed ^ kFpSalt, key ^ (std::uint64_t(g * 389 + l) << 18));
    }
  }
}

std::optional<u128> L0Sampler::recover(int group, int level) const {
  for (int sub = 0; sub < kSubcells; ++sub) {
    const Cell& c = cell(group, level, sub);
    if (empty_cell(c)) continue;
    if (c.count <= 0) continue;
    if (c.index_sum % static_cast<u128>(c.count) != 0) continue;
    const u128 idx = c.index_sum / static_cast<u128>(c.count);
    if (idx >= cfg_.universe_size) continue;
    const std::uint64_t key = fold(idx);
    const std::uint64_t expect =
        static_cast<std::uint64_t>(c.count) *
        mix64(cfg_.seed ^ kFpSalt, key ^ (std::uint64_t(group * 389 + level) << 18));
    if (expect != c.fp) continue;
    // Confirm the index actually hashes to this (group, level, sub) cell.
    const std::uint64_t hl =
        mix64(cfg_.seed ^ kLevelSalt, key ^ (std::uint64_t(group) << 20) ^ 0x5bd1e995);
    if (!in_level(hl, level)) continue;
    return idx;
  }
  return std::nullopt;
}

std::optional<u128> L0Sampler::sample() {
  if (cfg_.backend == SketchBackend::ExactOracle) {
    if (counts_.empty()) return std::nullopt;
    if (!cache_valid_) {
      support_cache_.clear();
      support_cache_.reserve(counts_.size());
      for (const auto& [idx, cnt] : counts_)
        if (cnt != 0) support_cache_.push_back(idx);
      cache_valid_ = true;
    }
    return support_cache_[draw_rng_.below(support_cache_.size())];
  }
  const int group = cursor_;
  cursor_ = (cursor_ + 1) % groups_;
  int deepest = -1;
  for (int l = levels_ - 1; l >= 0; --l) {
    bool nonempty = false;
    for (int sub = 0; sub < kSubcells; ++sub)
      if (!empty_cell(cell(group, l, sub))) nonempty = true;
    if (nonempty) {
      deepest = l;
      break;
    }
  }
  if (deepest < 0) return std::nullopt;
  for (int l = deepest; l >= 0; --l) {
    if (auto idx = recover(group, l)) return idx;
  }
  return std::nullopt;
}

std::size_t L0Sampler::words() const {
  if (cfg_.backend == SketchBackend::ExactOracle) return 2 * counts_.size();
  return cells_.size() * 4;
}

bool L0Sampler::operator==(const L0Sampler& other) const {
  return cfg_ == other.cfg_ && counts_ == other.counts_ && cells_ == other.cells_;
}

L0Sampler merge(const L0Sampler& a, const L0Sampler& b) {
  if (!(a.cfg_ == b.cfg_)) throw UsageError("merge: sketch configs differ");
  L0Sampler out(a.cfg_);
  out.counts_ = a.counts_;
  for (const auto& [idx, cnt] : b.counts_) {
    auto it = out.counts_.find(idx);
    if (it == out.counts_.end()) {
      out.counts_.emplace(idx, cnt);
    } else {
      it->second += cnt;
      if (it->second == 0) out.counts_.erase(it);
    }
  }
  out.cells_ = a.cells_;
  for (std::size_t i = 0; i < out.cells_.size(); ++i) {
    out.cells_[i].count += b.cells_[i].count;
    out.cells_[i].index_sum += b.cells_[i].index_sum;
    out.cells_[i].fp += b.cells_[i].fp;
  }
  return out;
}

}  // namespace streamlp
