#pragma once

#include <span>
#include <vector>

#include "agen/group_models.hpp"
#include "agen/kernel.hpp"
#include "agen/vecint.hpp"

namespace agen {

/// Operator on X x X acting by (x, y) -> (a11 x + a12 y, a21 x + a22 y).
struct BlockOperator {
  Operator a11, a12, a21, a22;

  [[nodiscard]] Eigen::Index dim() const { return a11.rows(); }
  [[nodiscard]] GraphVector apply(const GraphVector& v) const;
  /// The 2n x 2n matrix.
  [[nodiscard]] Operator dense() const;
};

/// Truncation T = (log(1/tol) + log(1 + max|h|)) / decay_rate capped at 200,
/// with a node density that resolves the oscillation e^{it(log|mu| + h)}.
QuadratureSpec qmu_quadrature(const GroupModel& g, const KernelParam& p,
                              double rel_tolerance = 1e-12);

/// Q_mu v = int F_mu(t) U_t v dt by vector quadrature along R + i q.line_offset_s.
StateVector apply_Qmu(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q,
                      const StateVector& v);

/// Q_mu assembled column by column.
Operator compute_Qmu(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q);
Operator compute_Qmu(const GroupModel& g, const KernelParam& p);

/// Spectral closed form V diag(nu/(nu+mu)^2) V*, nu = e^{-h}.
Operator qmu_spectral_oracle(const GroupModel& g, const KernelParam& p);

/// Comparison in the eigenbasis of the model: max of the relative error of
/// each diagonal entry and of the off-diagonal mass relative to max |oracle|.
double spectral_relative_error(const GroupModel& g, const Operator& computed, const Operator& oracle_matrix);

/// ||(Q U_{2i} + 2 mu Q U_i + mu^2 Q) x - U_i x|| / ||U_i x||.
double check_central_identity(const GroupModel& g, const KernelParam& p, const Operator& Q,
                              const StateVector& x);
double check_central_identity(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q,
                              const StateVector& x);

/// [[-Q + I/mu, -Q/mu], [mu Q, Q]].
BlockOperator build_Rmu_from_Q(const Operator& Q, Complex mu);
BlockOperator build_Rmu(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q);

/// diag(U_i, U_i).
BlockOperator ampliation(const GroupModel& g);

struct ResolventReport {
  double left_residual = 0.0;   // ||(Delta + mu) R v - v|| / ||v||
  double right_residual = 0.0;  // ||R (Delta + mu) v - v|| / ||v||
  double range_graph_residual = 0.0;  // R v stays on the graph
  int samples = 0;
};

/// Residuals of both resolvent identities on graph vectors. Throws
/// GraphMembershipViolation if a sample is not on Graph(U_i).
ResolventReport verify_resolvent_identities(const GroupModel& g, const KernelParam& p,
                                            const BlockOperator& R,
                                            std::span<const GraphVector> samples);
ResolventReport verify_resolvent_identities(const GroupModel& g, const KernelParam& p,
                                            const QuadratureSpec& q,
                                            std::span<const GraphVector> samples);

/// Under x -> (x, U_i x), R acts as (U_i + mu)^{-1}. Returns the larger
/// relative matrix error of the two components against the spectral
/// inverse.
double graph_correspondence_residual(const GroupModel& g, const BlockOperator& R, Complex mu);

/// Operator 2-norm of R restricted to Graph(U_i), using an orthonormal basis
/// of the graph.
double graph_restricted_norm(const GroupModel& g, const BlockOperator& R);

/// min_k |(-mu) - nu_k|.
double spectrum_distance(const GroupModel& g, Complex mu);

struct ScanRow {
  Complex mu;
  double resolvent_norm = 0.0;
  double oracle_distance = 0.0;
  bool lower_bound_ok = false;
  /// |resolvent_norm * oracle_distance - 1|.
  double equality_residual = 0.0;
};

/// Resolvent norm of Delta at -mu for every mu in the grid. Throws
/// BranchViolation for inadmissible mu.
std::vector<ScanRow> spectrum_scan(const GroupModel& g, std::span<const Complex> mu_grid,
                                   double rel_tolerance = 1e-12);

/// Values mu = -w for w on a points x points grid over [re_min, re_max] x
/// [im_min, im_max], skipping w = 0 and the sector |arg w| < guard_angle
/// around the positive real axis.
std::vector<Complex> make_scan_grid(double re_min, double re_max, double im_min, double im_max,
                                    int points, double guard_angle = kDeltaMin);

}  // namespace agen
