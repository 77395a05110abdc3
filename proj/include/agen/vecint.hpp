#pragma once

#include <functional>
#include <span>
#include <vector>

#include "agen/types.hpp"

namespace agen {

enum class QuadratureRule { GaussLegendreComposite, TanhSinh };

/// Discretization of an integral over the horizontal line R + i*s, truncated
/// to [-T, T] (in the real parameter).
struct QuadratureSpec {
  double truncation_T = 30.0;
  double rel_tolerance = 1e-12;
  int nodes_per_unit = 8;
  double line_offset_s = 0.0;
  QuadratureRule rule = QuadratureRule::GaussLegendreComposite;
  /// The truncation is doubled while the tail estimate is too large, up to
  /// this bound.
  double max_truncation = 400.0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// T = max(1, log(1/tol)/tail_rate), 8 nodes per unit, 16-point panels.
QuadratureSpec default_quadrature_spec(double tail_rate, double rel_tolerance = 1e-12);

/// Nodes t_k in [-T, T] (real parameter) and weights w_k.
struct QuadratureNodes {
  std::vector<double> points;
  std::vector<double> weights;
};

QuadratureNodes make_nodes(QuadratureRule rule, double truncation_T, int nodes_per_unit);

/// Gauss-Legendre abscissae and weights on [-1, 1], ascending.
const QuadratureNodes& gauss_legendre_16();

using VectorIntegrand = std::function<StateVector(Complex)>;
using ScalarIntegrand = std::function<Complex(Complex)>;
using Density = std::function<Complex(Complex)>;

struct VectorIntegral {
  StateVector value;
  double tail_estimate = 0.0;
  /// Quadrature of |density| * |f|; the scale the tolerance refers to.
  double absolute_mass = 0.0;
  double truncation_used = 0.0;
  std::size_t evaluations = 0;
};

/// Componentwise quadrature of the integral of f(t+is) density(t+is) dt over
/// the real line. tail_rate is the caller's exponential decay bound for
/// |density| |f| and feeds the tail estimate. Summation runs in ascending t.
VectorIntegral integrate_vector_detailed(const VectorIntegrand& f, const Density& density,
                                         const QuadratureSpec& q, double tail_rate);

StateVector integrate_vector(const VectorIntegrand& f, const Density& density,
                             const QuadratureSpec& q, double tail_rate);

Complex integrate_scalar(const ScalarIntegrand& f, const Density& density,
                         const QuadratureSpec& q, double tail_rate);

/// max over probes phi of |<integral of f, phi> - integral of <f, phi> density|,
/// with the right-hand side computed by scalar quadrature.
double pairing_consistency_check(const VectorIntegrand& f, const Density& density,
                                 const QuadratureSpec& q, double tail_rate,
                                 std::span<const StateVector> probes);

}  // namespace agen
