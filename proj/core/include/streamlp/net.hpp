#pragma once

#include <span>
#include <vector>

#include "streamlp/common.hpp"

namespace streamlp {

// Direction lattice over the unit d-cube plus geometric radial levels.
// Maps input points to sketch-universe coordinates and back to the
// representative points the solvers optimize over. The net is never
// materialized; every operation is a pure O(d) function of the config.
//
// Radial mode (MEB): a point q = p - center with norm in
// ((1+eps)^l, (1+eps)^{l+1}] gets radial level l and the representative
// center + (1+eps)^{l+1} * u where u is the snapped unit direction.
// Exact powers (within a relative 2^-40 guard band) map to their own
// exponent. The representative norm always rounds up, which the enclosing-
// ball correction depends on.
//
// Non-radial mode (SVM/LP/SDP nets): points inside [-1,1]^d around the
// center snap straight to the lattice; a single level 0 exists.
struct NetConfig {
  int d = 1;
  double eps = 0.5;            // net accuracy, in (0, 1]
  std::vector<double> center;  // empty means the origin
  double r_max = 0.0;          // radial mode only; 0 collapses to CENTER
  bool radial = false;

  double per_axis_step() const;
  int cells_per_axis() const;  // lattice indices run 0..cells_per_axis()
  int levels() const;          // L (radial), 1 otherwise
  void validate() const;
};

inline constexpr int kCenterLevel = -1;

// (direction cell, radial level); CENTER is reserved for points equal to
// the net center.
struct NetIndex {
  std::vector<int> cell;     // per-axis lattice indices; empty for CENTER
  int level = kCenterLevel;  // kCenterLevel for CENTER

  bool is_center() const { return level == kCenterLevel; }
  static NetIndex center_index() { return NetIndex{}; }
  bool operator==(const NetIndex&) const = default;
};

// Nearest-net-point snap; per-coordinate ties round toward -inf.
// Throws DomainError when the point falls outside the configured net.
NetIndex snap(std::span<const double> p, const NetConfig& cfg);

// The representative point for an index (radial: normalized direction
// scaled to the level norm). Deterministic.
std::vector<double> unsnap(const NetIndex& idx, const NetConfig& cfg);

// Raw lattice vector of the cell, before normalization; the metric-net
// guarantee |p/|p| - e| <= eps/2 holds for this vector.
std::vector<double> lattice_vector(const NetIndex& idx, const NetConfig& cfg);

// Bijection between NetIndex and 0..net_size-1 (CENTER maps to 0).
u128 flat_index(const NetIndex& idx, const NetConfig& cfg);
NetIndex from_flat(u128 flat, const NetConfig& cfg);

// Universe cardinality including the CENTER slot:
// radial: L * (1+ceil(2*sqrt(d)/eps))^d + 1, else (1+ceil(2*sqrt(d)/eps))^d + 1.
u128 net_size(const NetConfig& cfg);

}  // namespace streamlp
