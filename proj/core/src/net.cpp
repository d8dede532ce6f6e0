#include "streamlp/net.hpp"

#include <algorithm>
#include <cmath>

namespace streamlp {

namespace {

constexpr double kGuard = 9.094947017729282e-13;  // 2^-40

// Smallest integer j with (1+eps)^j >= v within the relative guard band.
int guarded_log_ceil(double v, double eps) {
  const double x = std::log(v) / std::log1p(eps);
  int j = static_cast<int>(std::floor(x)) - 2;
  while (std::pow(1.0 + eps, j) < v * (1.0 - kGuard)) ++j;
  return j;
}

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double NetConfig::per_axis_step() const { return eps / std::sqrt(double(d)); }

int NetConfig::cells_per_axis() const {
  return static_cast<int>(std::ceil(2.0 * std::sqrt(double(d)) / eps - kGuard));
}

int NetConfig::levels() const {
  if (!radial) return 1;
  if (r_max <= 0.0) return 0;
  return std::max(1, guarded_log_ceil(r_max, eps));
}

void NetConfig::validate() const {
  if (d < 1) throw UsageError("net: dimension must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw UsageError("net: eps must be in (0,1]");
  if (!center.empty() && static_cast<int>(center.size()) != d)
    throw UsageError("net: center dimension mismatch");
  if (r_max < 0.0) throw UsageError("net: r_max must be >= 0");
}

u128 net_size(const NetConfig& cfg) {
  cfg.validate();
  const u128 cells = checked_pow(u128(cfg.cells_per_axis()) + 1, cfg.d);
  if (cfg.radial) return checked_mul(cells, u128(cfg.levels())) + 1;
  return cells + 1;
}

NetIndex snap(std::span<const double> p, const NetConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(p.size()) != cfg.d) throw UsageError("snap: dimension mismatch");
  std::vector<double> q(p.begin(), p.end());
  if (!cfg.center.empty())
    for (int i = 0; i < cfg.d; ++i) q[i] -= cfg.center[i];

  const double step = cfg.per_axis_step();
  const int cmax = cfg.cells_per_axis();
  auto round_axis = [&](double v) {
    // nearest lattice value -1 + i*step, ties toward -inf
    const double x = (v + 1.0) / step;
    long long i = static_cast<long long>(std::ceil(x - 0.5));
    return static_cast<int>(std::clamp(i, 0LL, static_cast<long long>(cmax)));
  };

  if (!cfg.radial) {
    // The lattice top value -1 + cmax*step can overhang 1; accept points up
    // to the lattice reach so unsnap output always re-snaps.
    const double reach = std::max(1.0, -1.0 + cmax * step) + 1e-9;
    bool all_zero = true;
    for (double v : q) {
      if (v != 0.0) all_zero = false;
      if (std::abs(v) > reach)
        throw DomainError("snap: point outside the unit-cube net domain");
    }
    if (all_zero) return NetIndex::center_index();
    NetIndex idx;
    idx.level = 0;
    idx.cell.resize(cfg.d);
    for (int i = 0; i < cfg.d; ++i) idx.cell[i] = round_axis(q[i]);
    return idx;
  }

  const double nrm = norm_of(q);
  if (nrm == 0.0) return NetIndex::center_index();
  const int rep_exp = std::max(0, guarded_log_ceil(nrm, cfg.eps));
  if (cfg.levels() == 0 || rep_exp > cfg.levels())
    throw DomainError("snap: point norm exceeds the net range; rebuild with larger r_max");
  NetIndex idx;
  idx.level = std::max(0, rep_exp - 1);
  idx.cell.resize(cfg.d);
  for (int i = 0; i < cfg.d; ++i) idx.cell[i] = round_axis(q[i] / nrm);
  return idx;
}

std::vector<double> lattice_vector(const NetIndex& idx, const NetConfig& cfg) {
  if (idx.is_center()) return std::vector<double>(cfg.d, 0.0);
  if (static_cast<int>(idx.cell.size()) != cfg.d)
    throw UsageError("lattice_vector: index dimension mismatch");
  const double step = cfg.per_axis_step();
  std::vector<double> v(cfg.d);
  for (int i = 0; i < cfg.d; ++i) v[i] = -1.0 + idx.cell[i] * step;
  return v;
}

std::vector<double> unsnap(const NetIndex& idx, const NetConfig& cfg) {
  cfg.validate();
  std::vector<double> out = cfg.center;
  if (out.empty()) out.assign(cfg.d, 0.0);
  if (idx.is_center()) return out;

  std::vector<double> v = lattice_vector(idx, cfg);
  if (!cfg.radial) {
    for (int i = 0; i < cfg.d; ++i) out[i] += v[i];
    return out;
  }
  const double nrm = norm_of(v);
  if (nrm == 0.0) throw UsageError("unsnap: degenerate zero-direction cell");
  const double scale = std::pow(1.0 + cfg.eps, idx.level + 1) / nrm;
  for (int i = 0; i < cfg.d; ++i) out[i] += v[i] * scale;
  return out;
}

u128 flat_index(const NetIndex& idx, const NetConfig& cfg) {
  if (idx.is_center()) return 0;
  const int cmax = cfg.cells_per_axis();
  if (static_cast<int>(idx.cell.size()) != cfg.d || idx.level < 0 ||
      idx.level >= cfg.levels())
    throw UsageError("flat_index: index out of range");
  u128 rank = 0;
  for (int i = cfg.d - 1; i >= 0; --i) {
    if (idx.cell[i] < 0 || idx.cell[i] > cmax)
      throw UsageError("flat_index: cell out of range");
    rank = rank * (u128(cmax) + 1) + u128(idx.cell[i]);
  }
  const u128 cells = checked_pow(u128(cmax) + 1, cfg.d);
  return 1 + u128(idx.level) * cells + rank;
}

NetIndex from_flat(u128 flat, const NetConfig& cfg) {
  if (flat >= net_size(cfg)) throw UsageError("from_flat: index out of range");
  if (flat == 0) return NetIndex::center_index();
  const int cmax = cfg.cells_per_axis();
  const u128 cells = checked_pow(u128(cmax) + 1, cfg.d);
  u128 rest = flat - 1;
  NetIndex idx;
  idx.level = static_cast<int>(rest / cells);
  rest %= cells;
  idx.cell.resize(cfg.d);
  for (int i = 0; i < cfg.d; ++i) {
    idx.cell[i] = static_cast<int>(rest % (u128(cmax) + 1));
    rest /= u128(cmax) + 1;
  }
  return idx;
}

}  // namespace streamlp
