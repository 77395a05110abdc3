#pragma once

#include <span>
#include <vector>

#include "agen/group_models.hpp"
#include "agen/vecint.hpp"

namespace agen {

/// Quadrature for the Gaussian sqrt(n/pi) e^{-n t^2}: T = max(1,
/// sqrt(log(1/tol)/n)) and a node density that resolves both the width
/// 1/sqrt(n) and the oscillation of U_t.
QuadratureSpec gaussian_quadrature(const GroupModel& g, double n, const QuadratureSpec& base);

/// x_n = sqrt(n/pi) int U_t x e^{-n t^2} dt. n > 0 may be any real.
StateVector mollify(const GroupModel& g, const StateVector& x, double n,
                    const QuadratureSpec& q = QuadratureSpec{});

/// Exact x_n: V diag(e^{-h_k^2/(4n)}) V* x.
StateVector mollify_oracle(const GroupModel& g, const StateVector& x, double n);

struct MollifierRow {
  double n = 0.0;
  double error = 0.0;  // ||x_n - x||
};

/// ||x_n - x|| along an increasing sequence of n.
std::vector<MollifierRow> mollifier_convergence_report(const GroupModel& g, const StateVector& x,
                                                       std::span<const double> n_sequence,
                                                       const QuadratureSpec& q = QuadratureSpec{});

/// A = int U_t density(t) dt as a matrix, assembled column by column.
Operator averaging_operator(const GroupModel& g, const Density& density, const QuadratureSpec& q,
                            double tail_rate);

/// Matrix of x -> x_n.
Operator mollifier_operator(const GroupModel& g, double n, const QuadratureSpec& q = QuadratureSpec{});

/// max over samples of ||A S x - S A x|| / ||x||. Throws HypothesisViolation
/// unless ||S U_t - U_t S|| <= 1e-10 max(1, ||S||) at a fixed set of times.
double commutation_check(const GroupModel& g, const Operator& A, const Operator& S,
                         std::span<const StateVector> samples);

}  // namespace agen
