#pragma once

#include <random>
#include <vector>

#include "agen/types.hpp"

namespace agen {

/// Largest admissible |h_k| (or ||H||_2).
inline constexpr double kHMax = 20.0;
/// |Im z| * spectral radius must not exceed this, so |U_z| <= e^40.
inline constexpr double kOverflowGuard = 40.0;
/// Relative tolerance for graph membership y = U_i x.
inline constexpr double kGraphTol = 1e-8;

enum class ModelKind { Diagonal, Hermitian };

/// A one-parameter group of isometries on C^n with U_t = exp(itH), H
/// Hermitian. The Diagonal kind stores H = diag(h). Every vector of a
/// finite-dimensional model is entire analytic, so U_z x is defined for all
/// complex z by exp(izH) x.
class GroupModel {
 public:
  static GroupModel diagonal(std::vector<double> exponents);
  /// Throws InvalidArgument unless H is Hermitian to 1e-12 relative and
  /// ||H||_2 <= kHMax.
  static GroupModel hermitian(const Operator& generator);

  [[nodiscard]] ModelKind kind() const { return kind_; }
  [[nodiscard]] Eigen::Index dim() const { return spectrum_.size(); }
  /// Eigenvalues h_k of H, ascending for Hermitian models.
  [[nodiscard]] const Eigen::VectorXd& spectrum() const { return spectrum_; }
  /// Unitary V with H = V diag(h) V*.
  [[nodiscard]] const Operator& eigenvectors() const { return eigenvectors_; }
  [[nodiscard]] const Operator& generator() const { return generator_; }
  [[nodiscard]] double spectral_radius() const { return spectral_radius_; }

  /// V diag(phi(h_k)) V*.
  template <typename Fn>
  [[nodiscard]] Operator spectral_function(Fn&& phi) const {
    Eigen::VectorXcd values(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) values(k) = phi(spectrum_(k));
    if (kind_ == ModelKind::Diagonal) return values.asDiagonal();
    return eigenvectors_ * values.asDiagonal() * eigenvectors_.adjoint();
  }

 private:
  GroupModel() = default;
  ModelKind kind_ = ModelKind::Diagonal;
  Eigen::VectorXd spectrum_;
  Operator eigenvectors_;
  Operator generator_;
  double spectral_radius_ = 0.0;
};

/// Throws OverflowRisk when |Im z| * spectral_radius > kOverflowGuard.
void require_within_overflow_guard(const GroupModel& g, Complex z);

/// U_z x: y_k = e^{i z h_k} x_k (Diagonal) or exp(izH) x (Hermitian).
StateVector apply_Uz(const GroupModel& g, Complex z, const StateVector& x);

/// Matrix of U_z through the eigendecomposition.
Operator Uz_matrix(const GroupModel& g, Complex z);

/// Matrix of U_z through scaling and squaring on izH; cross-check only.
Operator Uz_matrix_scaling_squaring(const GroupModel& g, Complex z);

/// U_i = exp(-H); positive definite.
Operator analytic_generator(const GroupModel& g);

/// Eigenvalues e^{-h_k} of U_i.
Eigen::VectorXd analytic_generator_spectrum(const GroupModel& g);

struct StripReport {
  double group_law_residual = 0.0;
  double cauchy_riemann_residual = 0.0;
  int samples = 0;
};

/// Checks U_t U_{is} x = U_{t+is} x and the Cauchy-Riemann equation
/// dF/ds = i dF/dt for F(t + is) = U_{t+is} x on the strip between R and
/// R + i Im z, at num_boundary_samples abscissae and five heights.
/// Residuals are relative to ||x||.
StripReport strip_continuation_check(const GroupModel& g, const StateVector& x, Complex z,
                                     int num_boundary_samples);

/// (x, U_i x).
GraphVector make_graph_vector(const GroupModel& g, const StateVector& x);

/// ||y - U_i x|| / max(||x||, ||y||, tiny).
double graph_residual(const GroupModel& g, const GraphVector& v);

/// Throws GraphMembershipViolation when graph_residual exceeds kGraphTol.
void require_graph_vector(const GroupModel& g, const GraphVector& v);

/// Random Hermitian model of size n with eigenvalues uniform in
/// [-spread, spread] and a Haar-like eigenbasis.
GroupModel random_hermitian_model(Eigen::Index n, double spread, std::mt19937_64& rng);

/// Standard complex Gaussian vector normalised to unit length.
StateVector random_unit_vector(Eigen::Index n, std::mt19937_64& rng);

}  // namespace agen
