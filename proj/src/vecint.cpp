#include "agen/vecint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agen/errors.hpp"
#include "agen/parallel.hpp"

namespace agen {

namespace {

constexpr int kPanelPoints = 16;
constexpr double kTanhSinhLimit = 3.5;
constexpr std::size_t kParallelThreshold = 512;

QuadratureNodes compute_gauss_legendre(int order) {
  QuadratureNodes rule;
  rule.points.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.points[i] = -z;
    rule.points[order - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(truncation_T >= 1.0) || !std::isfinite(truncation_T))
    throw InvalidArgument("truncation_T must be >= 1, got " + std::to_string(truncation_T));
  if (!(rel_tolerance >= 1e-14 && rel_tolerance <= 1e-2))
    throw InvalidArgument("rel_tolerance must lie in [1e-14, 1e-2]");
  if (nodes_per_unit < 1) throw InvalidArgument("nodes_per_unit must be positive");
  if (!std::isfinite(line_offset_s)) throw InvalidArgument("line_offset_s must be finite");
  if (!(max_truncation >= truncation_T))
    throw InvalidArgument("max_truncation must be >= truncation_T");
}

QuadratureSpec default_quadrature_spec(double tail_rate, double rel_tolerance) {
  if (!(tail_rate > 0.0)) throw InvalidArgument("tail_rate must be positive");
  QuadratureSpec q;
  q.rel_tolerance = rel_tolerance;
  q.truncation_T = std::max(1.0, std::log(1.0 / rel_tolerance) / tail_rate);
  q.max_truncation = std::max(q.max_truncation, q.truncation_T);
  return q;
}

const QuadratureNodes& gauss_legendre_16() {
  static const QuadratureNodes rule = compute_gauss_legendre(kPanelPoints);
  return rule;
}

QuadratureNodes make_nodes(QuadratureRule rule, double truncation_T, int nodes_per_unit) {
  QuadratureNodes out;
  const double span = 2.0 * truncation_T;
  if (rule == QuadratureRule::GaussLegendreComposite) {
    const double target_width = static_cast<double>(kPanelPoints) / nodes_per_unit;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span / target_width)));
    const double width = span / static_cast<double>(panels);
    const auto& gl = gauss_legendre_16();
    out.points.reserve(panels * kPanelPoints);
    out.weights.reserve(panels * kPanelPoints);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = -truncation_T + (static_cast<double>(p) + 0.5) * width;
      for (int k = 0; k < kPanelPoints; ++k) {
        out.points.push_back(mid + 0.5 * width * gl.points[k]);
        out.weights.push_back(0.5 * width * gl.weights[k]);
      }
    }
    return out;
  }

  // Tanh-sinh: t = T tanh(pi/2 sinh u), uniform in u on [-L, L].
  const auto count = static_cast<std::size_t>(
      std::max<double>(2 * kPanelPoints + 1, std::ceil(span * nodes_per_unit)) );
  const std::size_t n = count | 1U;
  const double h = 2.0 * kTanhSinhLimit / static_cast<double>(n - 1);
  out.points.reserve(n);
  out.weights.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = -kTanhSinhLimit + h * static_cast<double>(k);
    const double arg = 0.5 * kPi * std::sinh(u);
    const double c = std::cosh(arg);
    out.points.push_back(truncation_T * std::tanh(arg));
    out.weights.push_back(truncation_T * h * 0.5 * kPi * std::cosh(u) / (c * c));
  }
  return out;
}

VectorIntegral integrate_vector_detailed(const VectorIntegrand& f, const Density& density,
                                         const QuadratureSpec& q, double tail_rate) {
  q.validate();
  if (!(tail_rate > 0.0)) throw InvalidArgument("tail_rate must be positive");

  double truncation = q.truncation_T;
  std::size_t evaluations = 0;
  for (;;) {
    const QuadratureNodes nodes = make_nodes(q.rule, truncation, q.nodes_per_unit);
    const std::size_t count = nodes.points.size();
    std::vector<StateVector> samples(count);
    std::vector<double> magnitudes(count);

    auto evaluate = [&](std::size_t k) {
      const Complex z{nodes.points[k], q.line_offset_s};
      const Complex d = density(z);
      StateVector fx = (d == Complex{0.0, 0.0}) ? StateVector() : f(z);
      if (!std::isfinite(d.real()) || !std::isfinite(d.imag()) || !fx.allFinite())
        throw NonFiniteSample("integrand not finite at t = " + std::to_string(nodes.points[k]));
      magnitudes[k] = std::abs(d) * (fx.size() ? fx.norm() : 0.0);
      samples[k] = fx.size() ? StateVector(fx * d) : StateVector();
    };
    if (count >= kParallelThreshold) {
      parallel_for(count, evaluate);
    } else {
      for (std::size_t k = 0; k < count; ++k) evaluate(k);
    }
    evaluations += count;

    Eigen::Index dim = 0;
    for (const auto& s : samples) dim = std::max(dim, s.size());
    if (dim == 0) {
      // Density vanished at every node; evaluate f once for its dimension.
      dim = f(Complex{0.0, q.line_offset_s}).size();
    }

    VectorIntegral out;
    out.value = StateVector::Zero(dim);
    for (std::size_t k = 0; k < count; ++k) {
      if (samples[k].size() == 0) continue;
      if (samples[k].size() != dim) throw InvalidArgument("integrand changed dimension");
      out.value += nodes.weights[k] * samples[k];
      out.absolute_mass += nodes.weights[k] * magnitudes[k];
    }

    // Max |integrand| over the outermost panel width at each end.
    const double edge = std::min(truncation, static_cast<double>(kPanelPoints) / q.nodes_per_unit);
    double left = 0.0, right = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      if (nodes.points[k] <= -truncation + edge) left = std::max(left, magnitudes[k]);
      if (nodes.points[k] >= truncation - edge) right = std::max(right, magnitudes[k]);
    }
    out.tail_estimate = (left + right) / tail_rate;
    out.truncation_used = truncation;
    out.evaluations = evaluations;

    if (out.tail_estimate <= q.rel_tolerance * out.absolute_mass) return out;
    if (truncation >= q.max_truncation) {
      throw QuadratureNonConvergence("tail estimate " + std::to_string(out.tail_estimate) +
                                     " exceeds tolerance at truncation " +
                                     std::to_string(truncation));
    }
    truncation = std::min(2.0 * truncation, q.max_truncation);
  }
}

StateVector integrate_vector(const VectorIntegrand& f, const Density& density,
                             const QuadratureSpec& q, double tail_rate) {
  return integrate_vector_detailed(f, density, q, tail_rate).value;
}

Complex integrate_scalar(const ScalarIntegrand& f, const Density& density,
                         const QuadratureSpec& q, double tail_rate) {
  const VectorIntegrand lifted = [&f](Complex z) {
    StateVector v(1);
    v(0) = f(z);
    return v;
  };
  return integrate_vector(lifted, density, q, tail_rate)(0);
}

double pairing_consistency_check(const VectorIntegrand& f, const Density& density,
                                 const QuadratureSpec& q, double tail_rate,
                                 std::span<const StateVector> probes) {
  const StateVector y = integrate_vector(f, density, q, tail_rate);
  double worst = 0.0;
  for (const StateVector& phi : probes) {
    if (phi.size() != y.size()) throw InvalidArgument("probe dimension mismatch");
    const Complex lhs = (phi.transpose() * y)(0);
    const Complex rhs = integrate_scalar(
        [&](Complex z) { return (phi.transpose() * f(z))(0); }, density, q, tail_rate);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace agen
