#include "agen/group_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "agen/errors.hpp"

namespace agen {

GroupModel GroupModel::diagonal(std::vector<double> exponents) {
  if (exponents.empty()) throw InvalidArgument("model dimension must be positive");
  GroupModel g;
  g.kind_ = ModelKind::Diagonal;
  const auto n = static_cast<Eigen::Index>(exponents.size());
  g.spectrum_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = exponents[static_cast<std::size_t>(k)];
    if (!std::isfinite(h)) throw InvalidArgument("exponents must be finite");
    g.spectrum_(k) = h;
    g.spectral_radius_ = std::max(g.spectral_radius_, std::abs(h));
  }
  if (g.spectral_radius_ > kHMax)
    throw InvalidArgument("max |h_k| = " + std::to_string(g.spectral_radius_) +
                          " exceeds H_MAX = 20");
  g.eigenvectors_ = Operator::Identity(n, n);
  g.generator_ = g.spectrum_.cast<Complex>().asDiagonal();
  return g;
}

GroupModel GroupModel::hermitian(const Operator& generator) {
  if (generator.rows() == 0 || generator.rows() != generator.cols())
    throw InvalidArgument("generator must be a non-empty square matrix");
  if (!generator.allFinite()) throw InvalidArgument("generator entries must be finite");
  const double scale = generator.norm();
  if ((generator - generator.adjoint()).norm() > 1e-12 * std::max(scale, 1e-300))
    throw InvalidArgument("generator is not Hermitian");

  const Operator symmetric = 0.5 * (generator + generator.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(symmetric);
  if (solver.info() != Eigen::Success) throw InvalidArgument("eigendecomposition failed");

  GroupModel g;
  g.kind_ = ModelKind::Hermitian;
  g.spectrum_ = solver.eigenvalues();
  g.eigenvectors_ = solver.eigenvectors();
  g.generator_ = symmetric;
  g.spectral_radius_ = g.spectrum_.cwiseAbs().maxCoeff();
  if (g.spectral_radius_ > kHMax)
    throw InvalidArgument("||H||_2 = " + std::to_string(g.spectral_radius_) +
                          " exceeds H_MAX = 20");
  return g;
}

void require_within_overflow_guard(const GroupModel& g, Complex z) {
  if (std::abs(z.imag()) * g.spectral_radius() > kOverflowGuard)
    throw OverflowRisk("|Im z| * spectral radius = " +
                       std::to_string(std::abs(z.imag()) * g.spectral_radius()) +
                       " exceeds the overflow guard 40");
}

StateVector apply_Uz(const GroupModel& g, Complex z, const StateVector& x) {
  if (x.size() != g.dim()) throw InvalidArgument("state dimension does not match the model");
  require_within_overflow_guard(g, z);
  const Eigen::Index n = g.dim();
  const Eigen::VectorXd& h = g.spectrum();
  if (g.kind() == ModelKind::Diagonal) {
    StateVector y(n);
    for (Eigen::Index k = 0; k < n; ++k) y(k) = std::exp(kI * z * h(k)) * x(k);
    return y;
  }
  StateVector coeffs = g.eigenvectors().adjoint() * x;
  for (Eigen::Index k = 0; k < n; ++k) coeffs(k) *= std::exp(kI * z * h(k));
  return g.eigenvectors() * coeffs;
}

Operator Uz_matrix(const GroupModel& g, Complex z) {
  require_within_overflow_guard(g, z);
  return g.spectral_function([z](double h) { return std::exp(kI * z * h); });
}

Operator Uz_matrix_scaling_squaring(const GroupModel& g, Complex z) {
  require_within_overflow_guard(g, z);
  const Operator a = (kI * z) * g.generator();
  return a.exp();
}

Operator analytic_generator(const GroupModel& g) { return Uz_matrix(g, kI); }

Eigen::VectorXd analytic_generator_spectrum(const GroupModel& g) {
  return g.spectrum().array().unaryExpr([](double h) { return std::exp(-h); });
}

StripReport strip_continuation_check(const GroupModel& g, const StateVector& x, Complex z,
                                     int num_boundary_samples) {
  if (num_boundary_samples < 1) throw InvalidArgument("need at least one boundary sample");
  require_within_overflow_guard(g, z);

  constexpr int kHeights = 5;
  const double step = 1e-4;
  const double height = z.imag();
  const double scale = std::max(x.norm(), 1e-300);

  StripReport report;
  for (int i = 0; i < num_boundary_samples; ++i) {
    const double t = num_boundary_samples == 1
                         ? z.real()
                         : z.real() - 1.0 + 2.0 * i / (num_boundary_samples - 1.0);
    for (int j = 0; j < kHeights; ++j) {
      const double s = height * j / (kHeights - 1.0);
      const Complex w{t, s};
      const StateVector direct = apply_Uz(g, w, x);
      const StateVector composed = apply_Uz(g, t, apply_Uz(g, kI * s, x));
      report.group_law_residual =
          std::max(report.group_law_residual, (direct - composed).norm() / scale);

      // Central differences in t and s.
      const StateVector dt = (apply_Uz(g, w + step, x) - apply_Uz(g, w - step, x)) / (2.0 * step);
      const StateVector ds =
          (apply_Uz(g, w + kI * step, x) - apply_Uz(g, w - kI * step, x)) / (2.0 * step);
      report.cauchy_riemann_residual =
          std::max(report.cauchy_riemann_residual, (ds - kI * dt).norm() / scale);
      ++report.samples;
    }
  }
  return report;
}

GraphVector make_graph_vector(const GroupModel& g, const StateVector& x) {
  return GraphVector{x, apply_Uz(g, kI, x)};
}

double graph_residual(const GroupModel& g, const GraphVector& v) {
  if (v.first.size() != g.dim() || v.second.size() != g.dim())
    throw InvalidArgument("graph vector dimension does not match the model");
  const double scale = std::max({v.first.norm(), v.second.norm(), 1e-300});
  return (v.second - apply_Uz(g, kI, v.first)).norm() / scale;
}

void require_graph_vector(const GroupModel& g, const GraphVector& v) {
  const double r = graph_residual(g, v);
  if (r > kGraphTol)
    throw GraphMembershipViolation("||y - U_i x|| relative residual " + std::to_string(r) +
                                   " exceeds 1e-8");
}

StateVector random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  StateVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = Complex{normal(rng), normal(rng)};
  return v / v.norm();
}

GroupModel random_hermitian_model(Eigen::Index n, double spread, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-spread, spread);
  Operator gaussian(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) gaussian(i, j) = Complex{normal(rng), normal(rng)};
  const Operator basis = Eigen::HouseholderQR<Operator>(gaussian).householderQ();
  Eigen::VectorXcd eigenvalues(n);
  for (Eigen::Index k = 0; k < n; ++k) eigenvalues(k) = uniform(rng);
  const Operator h = basis * eigenvalues.asDiagonal() * basis.adjoint();
  return GroupModel::hermitian(0.5 * (h + h.adjoint()));
}

}  // namespace agen
