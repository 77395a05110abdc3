#include "agen/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agen/errors.hpp"
#include "agen/parallel.hpp"

namespace agen {

GraphVector BlockOperator::apply(const GraphVector& v) const {
  return GraphVector{a11 * v.first + a12 * v.second, a21 * v.first + a22 * v.second};
}

Operator BlockOperator::dense() const {
  const Eigen::Index n = dim();
  Operator m(2 * n, 2 * n);
  m << a11, a12, a21, a22;
  return m;
}

QuadratureSpec qmu_quadrature(const GroupModel& g, const KernelParam& p, double rel_tolerance) {
  constexpr double kTruncationCap = 200.0;
  if (p.decay_rate() < kDeltaMin) throw BranchViolation("decay rate below pi/16");
  QuadratureSpec q;
  q.rel_tolerance = rel_tolerance;
  const double radius = g.spectral_radius();
  const double t = (std::log(1.0 / rel_tolerance) + std::log1p(radius)) / p.decay_rate();
  q.truncation_T = std::clamp(t, 1.0, kTruncationCap);
  q.max_truncation = kTruncationCap;
  const double bandwidth = std::abs(std::log(std::abs(p.mu()))) + radius + 1.0;
  q.nodes_per_unit = std::max(8, static_cast<int>(std::ceil(2.0 * bandwidth)));
  return q;
}

StateVector apply_Qmu(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q,
                      const StateVector& v) {
  if (p.decay_rate() < kDeltaMin) throw BranchViolation("decay rate below pi/16");
  return integrate_vector([&](Complex t) { return apply_Uz(g, t, v); },
                          [&](Complex t) { return eval_kernel(p, t); }, q, p.decay_rate());
}

Operator compute_Qmu(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q) {
  const Eigen::Index n = g.dim();
  Operator result(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const auto col = static_cast<Eigen::Index>(j);
    result.col(col) = apply_Qmu(g, p, q, StateVector::Unit(n, col));
  });
  return result;
}

Operator compute_Qmu(const GroupModel& g, const KernelParam& p) {
  return compute_Qmu(g, p, qmu_quadrature(g, p));
}

Operator qmu_spectral_oracle(const GroupModel& g, const KernelParam& p) {
  const Complex mu = p.mu();
  return g.spectral_function([mu](double h) {
    const double nu = std::exp(-h);
    return nu / ((nu + mu) * (nu + mu));
  });
}

double spectral_relative_error(const GroupModel& g, const Operator& computed,
                               const Operator& oracle_matrix) {
  const Operator& v = g.eigenvectors();
  const Operator a = v.adjoint() * computed * v;
  const Operator b = v.adjoint() * oracle_matrix * v;
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double diff = std::abs(a(i, j) - b(i, j));
      const double ref = (i == j) ? std::max(std::abs(b(i, j)), 1e-300) : scale;
      worst = std::max(worst, diff / ref);
    }
  }
  return worst;
}

double check_central_identity(const GroupModel& g, const KernelParam& p, const Operator& Q,
                              const StateVector& x) {
  if (x.norm() == 0.0) throw InvalidArgument("central identity needs x != 0");
  require_within_overflow_guard(g, 2.0 * kI);
  const Complex mu = p.mu();
  const StateVector ui_x = apply_Uz(g, kI, x);
  const StateVector u2i_x = apply_Uz(g, 2.0 * kI, x);
  const StateVector lhs = Q * u2i_x + 2.0 * mu * (Q * ui_x) + mu * mu * (Q * x);
  return (lhs - ui_x).norm() / ui_x.norm();
}

double check_central_identity(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q,
                              const StateVector& x) {
  return check_central_identity(g, p, compute_Qmu(g, p, q), x);
}

BlockOperator build_Rmu_from_Q(const Operator& Q, Complex mu) {
  if (std::abs(mu) < kMinMuMagnitude) throw BranchViolation("|mu| below 1e-6");
  const Eigen::Index n = Q.rows();
  const Operator identity = Operator::Identity(n, n);
  return BlockOperator{-Q + identity / mu, -Q / mu, mu * Q, Q};
}

BlockOperator build_Rmu(const GroupModel& g, const KernelParam& p, const QuadratureSpec& q) {
  return build_Rmu_from_Q(compute_Qmu(g, p, q), p.mu());
}

BlockOperator ampliation(const GroupModel& g) {
  const Eigen::Index n = g.dim();
  const Operator ui = analytic_generator(g);
  const Operator zero = Operator::Zero(n, n);
  return BlockOperator{ui, zero, zero, ui};
}

ResolventReport verify_resolvent_identities(const GroupModel& g, const KernelParam& p,
                                            const BlockOperator& R,
                                            std::span<const GraphVector> samples) {
  const Complex mu = p.mu();
  const BlockOperator delta = ampliation(g);
  auto shifted = [&](const GraphVector& v) {
    GraphVector w = delta.apply(v);
    w.first += mu * v.first;
    w.second += mu * v.second;
    return w;
  };
  auto difference = [](const GraphVector& a, const GraphVector& b) {
    return GraphVector{a.first - b.first, a.second - b.second};
  };

  ResolventReport report;
  for (const GraphVector& v : samples) {
    require_graph_vector(g, v);
    const double scale = std::max(norm(v), 1e-300);
    const GraphVector rv = R.apply(v);
    report.range_graph_residual = std::max(report.range_graph_residual, graph_residual(g, rv));
    report.left_residual = std::max(report.left_residual, norm(difference(shifted(rv), v)) / scale);
    report.right_residual =
        std::max(report.right_residual, norm(difference(R.apply(shifted(v)), v)) / scale);
    ++report.samples;
  }
  return report;
}

ResolventReport verify_resolvent_identities(const GroupModel& g, const KernelParam& p,
                                            const QuadratureSpec& q,
                                            std::span<const GraphVector> samples) {
  for (const GraphVector& v : samples) require_graph_vector(g, v);
  return verify_resolvent_identities(g, p, build_Rmu(g, p, q), samples);
}

double graph_correspondence_residual(const GroupModel& g, const BlockOperator& R, Complex mu) {
  const Operator ui = analytic_generator(g);
  const Operator first = R.a11 + R.a12 * ui;
  const Operator second = R.a21 + R.a22 * ui;
  const Operator inverse = g.spectral_function([mu](double h) { return 1.0 / (std::exp(-h) + mu); });
  const Operator second_oracle = ui * inverse;
  return std::max((first - inverse).norm() / inverse.norm(),
                  (second - second_oracle).norm() / second_oracle.norm());
}

double graph_restricted_norm(const GroupModel& g, const BlockOperator& R) {
  const Eigen::Index n = g.dim();
  Operator embedding(2 * n, n);
  embedding << Operator::Identity(n, n), analytic_generator(g);
  const Eigen::HouseholderQR<Operator> qr(embedding);
  const Operator basis = qr.householderQ() * Operator::Identity(2 * n, n);
  const Operator restricted = basis.adjoint() * R.dense() * basis;
  const Eigen::JacobiSVD<Operator> svd(restricted);
  return svd.singularValues()(0);
}

double spectrum_distance(const GroupModel& g, Complex mu) {
  const Eigen::VectorXd nu = analytic_generator_spectrum(g);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < nu.size(); ++k) best = std::min(best, std::abs(mu + nu(k)));
  return best;
}

std::vector<ScanRow> spectrum_scan(const GroupModel& g, std::span<const Complex> mu_grid,
                                   double rel_tolerance) {
  std::vector<KernelParam> params;
  params.reserve(mu_grid.size());
  for (const Complex mu : mu_grid) params.push_back(KernelParam::make(mu));

  std::vector<ScanRow> rows(mu_grid.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const KernelParam& p = params[k];
    const BlockOperator R = build_Rmu(g, p, qmu_quadrature(g, p, rel_tolerance));
    ScanRow& row = rows[k];
    row.mu = p.mu();
    row.resolvent_norm = graph_restricted_norm(g, R);
    row.oracle_distance = spectrum_distance(g, p.mu());
    row.lower_bound_ok = std::isfinite(row.resolvent_norm) &&
                         row.resolvent_norm >= (1.0 - 1e-6) / row.oracle_distance;
    row.equality_residual = std::abs(row.resolvent_norm * row.oracle_distance - 1.0);
  });
  return rows;
}

std::vector<Complex> make_scan_grid(double re_min, double re_max, double im_min, double im_max,
                                    int points, double guard_angle) {
  if (points < 2) throw InvalidArgument("scan grid needs at least 2 points per axis");
  std::vector<Complex> grid;
  for (int i = 0; i < points; ++i) {
    const double im = im_min + (im_max - im_min) * i / (points - 1.0);
    for (int j = 0; j < points; ++j) {
      const double re = re_min + (re_max - re_min) * j / (points - 1.0);
      const Complex w{re, im};
      if (std::abs(w) < kMinMuMagnitude) continue;
      if (std::abs(std::arg(w)) < guard_angle) continue;
      grid.push_back(-w);
    }
  }
  return grid;
}

}  // namespace agen
