#pragma once

#include <optional>
#include <span>

#include "streamlp/problem.hpp"

namespace streamlp {

// PSD separation oracle: nullopt when lambda_min(X) >= 0, otherwise the
// minimum eigenvector snapped onto the eps/(d*sqrt(d)) lattice, i.e. an
// explicit member of the lattice constraint family z^T X z >= 0.
std::optional<std::vector<double>> sdp_psd_violator(const SdpMatrix& x, double eps);

// Spectral shift followed by trace renormalization: (X + (3eps/d) I)/(1+3eps).
// The shift makes the lattice-feasible solution PSD; the renormalization
// restores unit trace without losing the O(eps) constraint guarantees.
SdpMatrix sdp_correct(const SdpMatrix& x, double eps);

// Bounded SDP as an LP over vec(X) (plus a margin variable for the
// saddle-point reduction). Constraint matrices snap onto per-support-pattern
// nets with entry step eps/min(d,S); right-hand sides snap to multiples of
// eps. The PSD family is realized as a separation oracle inside
// solve_basis: violated lattice rows are added as cuts until the candidate
// satisfies every generated lattice constraint, and the final correction
// shifts the solution into the PSD cone.
class BoundedSdpProblem : public LpTypeProblem {
 public:
  // objective entries form the symmetric matrix C with ||C||_F <= 1;
  // ignored in margin mode, where the objective maximizes sigma.
  BoundedSdpProblem(int d, double eps, int sparsity, double frobenius,
                    std::vector<SdpEntry> objective, bool margin = false);

  int nu() const override { return var_dim_; }
  int lambda() const override { return var_dim_ + 1; }
  u128 universe_size() const override { return universe_; }
  u128 snap_event(const StreamEvent& ev) const override;
  Solution solve_basis(std::span<const u128> basis) const override;
  bool violates(const Solution& sol, u128 index) const override;
  Solution correct_solution(const Solution& sol) const override;

  // Decoded constraint: dense row-major A and the snapped rhs.
  std::pair<std::vector<double>, double> decode(u128 index) const;
  bool has_margin() const { return margin_; }
  int dim() const { return d_; }

 private:
  u128 encode_pattern(const std::vector<int>& positions) const;
  std::vector<int> decode_pattern(u128 rank) const;

  int d_ = 0;
  int var_dim_ = 0;  // d^2 (+1 margin)
  double eps_ = 0.1;
  int sparsity_ = 1;
  double frobenius_ = 1.0;
  bool margin_ = false;
  std::vector<double> objective_dense_;  // d x d row-major C
  double value_step_ = 0.0;
  int value_span_ = 0;  // digits per entry = 2*value_span_+1
  double rhs_step_ = 0.0;
  int rhs_span_ = 0;
  u128 universe_ = 0;
};

// The saddle-point reduction max_X min_p sum p_i (<A_i,X> - b_i): stream
// rows become <A_i,X> >= b_i + sigma and the one-hot objective maximizes
// the margin sigma.
BoundedSdpProblem saddle_to_sdp(int d, double eps, int sparsity, double frobenius);

}  // namespace streamlp
