#include "agen/smoothing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "agen/errors.hpp"

namespace agen {

QuadratureSpec gaussian_quadrature(const GroupModel& g, double n, const QuadratureSpec& base) {
  if (!(n > 0.0)) throw InvalidArgument("mollifier parameter n must be positive");
  QuadratureSpec q = base;
  q.line_offset_s = 0.0;
  q.truncation_T = std::max(1.0, std::sqrt(std::log(1.0 / q.rel_tolerance) / n));
  q.max_truncation = std::max(q.max_truncation, 4.0 * q.truncation_T);
  const double width_density = base.nodes_per_unit * std::max(1.0, std::sqrt(n));
  const double oscillation_density = 2.0 * g.spectral_radius();
  q.nodes_per_unit = static_cast<int>(std::ceil(std::max(width_density, oscillation_density)));
  return q;
}

namespace {

Density gaussian_density(double n) {
  const double norm = std::sqrt(n / kPi);
  return [n, norm](Complex t) { return Complex{norm * std::exp(-n * t.real() * t.real()), 0.0}; };
}

}  // namespace

StateVector mollify(const GroupModel& g, const StateVector& x, double n, const QuadratureSpec& q) {
  const QuadratureSpec spec = gaussian_quadrature(g, n, q);
  return integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, gaussian_density(n), spec,
                          n * spec.truncation_T);
}

StateVector mollify_oracle(const GroupModel& g, const StateVector& x, double n) {
  if (!(n > 0.0)) throw InvalidArgument("mollifier parameter n must be positive");
  return g.spectral_function([n](double h) { return Complex{std::exp(-h * h / (4.0 * n)), 0.0}; }) *
         x;
}

std::vector<MollifierRow> mollifier_convergence_report(const GroupModel& g, const StateVector& x,
                                                       std::span<const double> n_sequence,
                                                       const QuadratureSpec& q) {
  std::vector<MollifierRow> rows;
  rows.reserve(n_sequence.size());
  double previous = 0.0;
  for (const double n : n_sequence) {
    if (!rows.empty() && !(n > previous))
      throw InvalidArgument("n_sequence must be strictly increasing");
    previous = n;
    rows.push_back({n, (mollify(g, x, n, q) - x).norm()});
  }
  return rows;
}

Operator averaging_operator(const GroupModel& g, const Density& density, const QuadratureSpec& q,
                            double tail_rate) {
  const Eigen::Index n = g.dim();
  Operator a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const StateVector e = StateVector::Unit(n, j);
    a.col(j) = integrate_vector([&](Complex t) { return apply_Uz(g, t, e); }, density, q, tail_rate);
  }
  return a;
}

Operator mollifier_operator(const GroupModel& g, double n, const QuadratureSpec& q) {
  const QuadratureSpec spec = gaussian_quadrature(g, n, q);
  return averaging_operator(g, gaussian_density(n), spec, n * spec.truncation_T);
}

double commutation_check(const GroupModel& g, const Operator& A, const Operator& S,
                         std::span<const StateVector> samples) {
  const Eigen::Index n = g.dim();
  if (A.rows() != n || A.cols() != n || S.rows() != n || S.cols() != n)
    throw InvalidArgument("operator dimensions do not match the model");

  constexpr std::array<double, 7> kTimes{-2.5, -1.0, -0.3, 0.2, 0.7, 1.9, 3.1};
  const double bound = 1e-10 * std::max(1.0, S.norm());
  for (const double t : kTimes) {
    const Operator u = Uz_matrix(g, t);
    const double c = (S * u - u * S).norm();
    if (c > bound)
      throw HypothesisViolation("S does not commute with U_t at t = " + std::to_string(t) +
                                " (||[S, U_t]|| = " + std::to_string(c) + ")");
  }

  double worst = 0.0;
  for (const StateVector& x : samples) {
    if (x.size() != n) throw InvalidArgument("sample dimension mismatch");
    const double scale = x.norm();
    if (scale == 0.0) continue;
    worst = std::max(worst, (A * (S * x) - S * (A * x)).norm() / scale);
  }
  return worst;
}

}  // namespace agen
