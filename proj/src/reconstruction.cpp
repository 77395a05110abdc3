#include "agen/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agen/errors.hpp"
#include "agen/parallel.hpp"
#include "agen/resolvent.hpp"
#include "agen/vecint.hpp"

namespace agen {

void RadialGrid::validate() const {
  if (!(mu_min > 0.0 && mu_max > mu_min)) throw InvalidArgument("need 0 < mu_min < mu_max");
  if (mu_min < kMinMuMagnitude) throw InvalidArgument("mu_min below 1e-6");
  if (panels < 2) throw InvalidArgument("radial grid needs at least 2 panels");
}

RadialSamples sample_radial(const std::function<StateVector(double)>& P, const RadialGrid& grid) {
  grid.validate();
  const auto& gl = gauss_legendre_16();
  const double s0 = std::log(grid.mu_min);
  const double width = (std::log(grid.mu_max) - s0) / grid.panels;

  RadialSamples out;
  out.grid = grid;
  for (int p = 0; p < grid.panels; ++p) {
    const double mid = s0 + (p + 0.5) * width;
    for (std::size_t k = 0; k < gl.points.size(); ++k) {
      out.mu.push_back(std::exp(mid + 0.5 * width * gl.points[k]));
      out.log_weights.push_back(0.5 * width * gl.weights[k]);
    }
  }
  out.values.resize(out.mu.size());
  parallel_for(out.mu.size(), [&](std::size_t k) { out.values[k] = P(out.mu[k]); });
  return out;
}

MellinIntegral mellin_integrate(const RadialSamples& samples, Complex alpha) {
  if (!(alpha.real() > 0.0 && alpha.real() < 1.0))
    throw InvalidArgument("Mellin integral requires 0 < Re alpha < 1");
  const std::size_t count = samples.mu.size();
  if (count < 4) throw InvalidArgument("too few radial samples");

  MellinIntegral out;
  out.value = StateVector::Zero(samples.values.front().size());
  for (std::size_t k = 0; k < count; ++k) {
    // mu^{alpha - 1} dmu = mu^alpha ds
    out.value += std::exp(alpha * std::log(samples.mu[k])) * samples.log_weights[k] *
                 samples.values[k];
  }

  // (0, mu_min): P ~ P0 + P1 mu.
  {
    const double a = samples.mu[0], b = samples.mu[1];
    const StateVector p1 = (samples.values[1] - samples.values[0]) / (b - a);
    const StateVector p0 = samples.values[0] - a * p1;
    const double m = samples.grid.mu_min;
    const Complex m_alpha = std::exp(alpha * std::log(m));
    out.value += p0 * (m_alpha / alpha) + p1 * (m_alpha * m / (alpha + 1.0));
    if (p0.norm() > 0.0) {
      out.tail_remainder += p1.squaredNorm() / p0.norm() * std::abs(m_alpha) * m * m /
                            std::abs(alpha + 2.0);
    }
  }
  // (mu_max, inf): P ~ c1 u + c2 u^2 with u = 1/mu.
  {
    const double ua = 1.0 / samples.mu[count - 1], ub = 1.0 / samples.mu[count - 2];
    const StateVector pa = samples.values[count - 1], pb = samples.values[count - 2];
    // Solve [ua ua^2; ub ub^2] [c1; c2] = [pa; pb].
    const double det = ua * ub * ub - ub * ua * ua;
    const StateVector c1 = (pa * ub * ub - pb * ua * ua) / det;
    const StateVector c2 = (pb * ua - pa * ub) / det;
    const double m = samples.grid.mu_max;
    const Complex m_alpha = std::exp(alpha * std::log(m));
    out.value += c1 * (m_alpha / m / (1.0 - alpha)) + c2 * (m_alpha / (m * m) / (2.0 - alpha));
    if (c1.norm() > 0.0) {
      out.tail_remainder +=
          c2.squaredNorm() / c1.norm() * std::abs(m_alpha) / (m * m * m) / std::abs(3.0 - alpha);
    }
  }
  return out;
}

StateVector delta_resolvent_action(const GroupModel& g, const KernelParam& p,
                                   const StateVector& x, double rel_tolerance) {
  const QuadratureSpec q = qmu_quadrature(g, p, rel_tolerance);
  return apply_Qmu(g, p, q, p.mu() * x + apply_Uz(g, kI, x));
}

namespace {

void finish_report(ReconstructionReport& report) {
  report.monotone = true;
  for (std::size_t k = 1; k < report.steps.size(); ++k) {
    if (!(report.steps[k].error < report.steps[k - 1].error)) report.monotone = false;
  }
  if (!report.steps.empty()) report.final_approx = report.steps.back().approx;
}

void require_truncation(double remainder, double prefactor, double scale, double tolerance) {
  if (remainder * prefactor > tolerance * scale)
    throw TruncationDominates("endpoint remainder " + std::to_string(remainder * prefactor) +
                              " exceeds tolerance; widen [mu_min, mu_max]");
}

}  // namespace

RadialSamples sample_delta_action(const GroupModel& g, const StateVector& x,
                                  const ReconstructionOptions& options) {
  require_graph_vector(g, make_graph_vector(g, x));
  return sample_radial(
      [&](double mu) {
        return delta_resolvent_action(g, KernelParam::make(Complex{mu, 0.0}), x,
                                      options.rel_tolerance);
      },
      options.grid);
}

ReconstructionReport reconstruct_Ut_delta(const GroupModel& g, double t, const StateVector& x,
                                          std::span<const Complex> z_sequence,
                                          const ReconstructionOptions& options) {
  return reconstruct_Ut_delta(g, t, x, z_sequence, sample_delta_action(g, x, options), options);
}

ReconstructionReport reconstruct_Ut_delta(const GroupModel& g, double t, const StateVector& x,
                                          std::span<const Complex> z_sequence,
                                          const RadialSamples& samples,
                                          const ReconstructionOptions& options) {
  for (const Complex z : z_sequence) {
    if (!(z.imag() > 0.0 && z.imag() < 1.0))
      throw InvalidArgument("z must satisfy 0 < Im z < 1");
  }

  const StateVector target = apply_Uz(g, t, x);
  const StateVector reversed = apply_Uz(g, -t, x);
  const double scale = std::max(x.norm(), 1e-300);

  ReconstructionReport report;
  report.t = t;
  for (const Complex z : z_sequence) {
    const Complex alpha = -kI * z;
    const Complex prefactor = std::sin(kPi * alpha) / kPi;
    const MellinIntegral integral = mellin_integrate(samples, alpha);
    require_truncation(integral.tail_remainder, std::abs(prefactor), scale,
                       options.truncation_tolerance);
    report.tail_remainder = std::max(report.tail_remainder, integral.tail_remainder);

    ReconstructionStep step;
    step.parameter = z;
    step.approx = prefactor * integral.value;
    step.error = (step.approx - target).norm();
    step.error_reversed = (step.approx - reversed).norm();
    step.quadrature_residual = (step.approx - apply_Uz(g, z, x)).norm();
    report.steps.push_back(std::move(step));
  }
  finish_report(report);
  return report;
}

RadialSamples sample_classical_resolvent(const GroupModel& g, const StateVector& x,
                                         const ReconstructionOptions& options) {
  const Eigen::Index n = g.dim();
  const Operator ui = analytic_generator(g);
  const StateVector ui_x = ui * x;
  return sample_radial(
      [&](double lambda) {
        const Operator shifted = ui + lambda * Operator::Identity(n, n);
        return StateVector(shifted.partialPivLu().solve(ui_x));
      },
      options.grid);
}

CzReport reconstruct_Ut_cz(const GroupModel& g, double t, const StateVector& x,
                           std::span<const Complex> alpha_sequence,
                           const ReconstructionOptions& options) {
  return reconstruct_Ut_cz(g, t, x, alpha_sequence, sample_classical_resolvent(g, x, options),
                           options);
}

CzReport reconstruct_Ut_cz(const GroupModel& g, double t, const StateVector& x,
                           std::span<const Complex> alpha_sequence, const RadialSamples& samples,
                           const ReconstructionOptions& options) {
  for (const Complex alpha : alpha_sequence) {
    if (!(alpha.real() > 0.0 && alpha.real() < 1.0))
      throw InvalidArgument("alpha must satisfy 0 < Re alpha < 1");
  }

  const StateVector target = apply_Uz(g, t, x);
  const StateVector reversed = apply_Uz(g, -t, x);
  const double scale = std::max(x.norm(), 1e-300);

  CzReport out;
  out.report.t = t;
  for (const Complex alpha : alpha_sequence) {
    const Complex prefactor = std::sin(kPi * alpha) / kPi;
    const MellinIntegral integral = mellin_integrate(samples, alpha);
    require_truncation(integral.tail_remainder, std::abs(prefactor), scale,
                       options.truncation_tolerance);
    out.report.tail_remainder = std::max(out.report.tail_remainder, integral.tail_remainder);

    ReconstructionStep step;
    step.parameter = alpha;
    step.approx = prefactor * integral.value;
    step.error = (step.approx - target).norm();
    step.error_reversed = (step.approx - reversed).norm();
    // Exact value of the integral: U_i^alpha x = exp(-alpha H) x.
    step.quadrature_residual =
        (step.approx - g.spectral_function([alpha](double h) { return std::exp(-alpha * h); }) * x)
            .norm();
    out.report.steps.push_back(std::move(step));
  }
  finish_report(out.report);
  if (!out.report.steps.empty()) {
    const ReconstructionStep& last = out.report.steps.back();
    // When U_t x and U_{-t} x agree up to the approximation error the
    // two limits cannot be told apart.
    const double separation = (target - reversed).norm();
    if (separation <= 2.0 * std::min(last.error, last.error_reversed))
      out.orientation = Orientation::Indistinguishable;
    else
      out.orientation = last.error <= last.error_reversed ? Orientation::Forward : Orientation::Reversed;
  }
  return out;
}

StateVector shifted_line_representation(const GroupModel& g, const KernelParam& p,
                                        const StateVector& x, double r, double rel_tolerance) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("r must lie in (0, 1)");
  // The line Im z = r passes at distance min(r, 1 - r) from the poles 0 and i.
  QuadratureSpec q = qmu_quadrature(g, p, rel_tolerance);
  q.line_offset_s = r;
  const double clearance = std::min(r, 1.0 - r);
  q.nodes_per_unit = std::max(q.nodes_per_unit, static_cast<int>(std::ceil(20.0 / clearance)));
  return integrate_vector([&](Complex z) { return apply_Uz(g, z, x); },
                          [&](Complex z) { return kernel_shift_sum(p, z); }, q, p.decay_rate());
}

BoundFitReport decay_bound_fit(const GroupModel& g, double ray_arg,
                               std::span<const double> magnitudes, const StateVector& x, double r,
                               double rel_tolerance) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("r must lie in (0, 1)");
  if (magnitudes.size() < 2) throw InvalidArgument("need at least two magnitudes");

  BoundFitReport report;
  report.r = r;
  report.rows.resize(magnitudes.size());
  const StateVector ui_x = apply_Uz(g, kI, x);
  parallel_for(magnitudes.size(), [&](std::size_t k) {
    const double m = magnitudes[k];
    if (!(m > 0.0)) throw InvalidArgument("magnitudes must be positive");
    const KernelParam p = KernelParam::make(std::polar(m, ray_arg));
    const QuadratureSpec q = qmu_quadrature(g, p, rel_tolerance);
    const StateVector direct = p.mu() * apply_Qmu(g, p, q, x) + apply_Qmu(g, p, q, ui_x);
    const StateVector shifted = shifted_line_representation(g, p, x, r, rel_tolerance);
    BoundFitRow& row = report.rows[k];
    row.magnitude = m;
    row.y_direct = direct.norm();
    row.shifted_difference = (direct - shifted).norm() / std::max(direct.norm(), 1e-300);
  });

  double top = 0.0;
  for (const auto& row : report.rows) {
    top = std::max(top, row.magnitude);
    report.max_shifted_difference = std::max(report.max_shifted_difference, row.shifted_difference);
    report.c_r = std::max(report.c_r, row.y_direct * std::pow(row.magnitude, r));
  }

  std::vector<double> lx, ly;
  for (const auto& row : report.rows) {
    if (row.magnitude >= top / 10.0 * (1.0 - 1e-12) && row.y_direct > 0.0) {
      lx.push_back(std::log(row.magnitude));
      ly.push_back(std::log(row.y_direct));
    }
  }
  if (lx.size() < 2) throw FitUnstable("fewer than two samples in the largest decade");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (sxx == 0.0) throw FitUnstable("degenerate magnitudes");
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double e = ly[k] - (report.intercept + report.slope * lx[k]);
    ss += e * e;
  }
  report.fit_residual = std::sqrt(ss / n);
  if (report.fit_residual > 0.1)
    throw FitUnstable("log-log fit residual " + std::to_string(report.fit_residual) +
                      " exceeds 0.1");
  report.slope_ok = report.slope <= -r + 0.1;
  return report;
}

}  // namespace agen
