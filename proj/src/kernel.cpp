#include "agen/kernel.hpp"

#include <cmath>
#include <string>

#include "agen/errors.hpp"

namespace agen {

namespace {

std::string to_string(Complex z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

// t / (e^{pi t} - e^{-pi t}) times exp(extra), arranged so that no
// intermediate overflows for large |Re t|.
Complex sinh_ratio_times_exp(Complex t, Complex extra) {
  if (std::abs(t) < kSeriesSwitchRadius) {
    // x / sinh x = 1 - x^2/6 + 7x^4/360 - 31x^6/15120 + 127x^8/604800
    const Complex x = kPi * t;
    const Complex x2 = x * x;
    const Complex series =
        1.0 + x2 * (-1.0 / 6.0 + x2 * (7.0 / 360.0 + x2 * (-31.0 / 15120.0 + x2 * (127.0 / 604800.0))));
    return series * std::exp(extra) / (2.0 * kPi);
  }
  if (t.real() >= 0.0) {
    return t * std::exp(extra - kPi * t) / (1.0 - std::exp(-2.0 * kPi * t));
  }
  return -t * std::exp(extra + kPi * t) / (1.0 - std::exp(2.0 * kPi * t));
}

// 1 / (e^{pi z} - e^{-pi z}) times exp(extra).
Complex inverse_sinh_times_exp(Complex z, Complex extra) {
  if (z.real() >= 0.0) {
    return std::exp(extra - kPi * z) / (1.0 - std::exp(-2.0 * kPi * z));
  }
  return -std::exp(extra + kPi * z) / (1.0 - std::exp(2.0 * kPi * z));
}

void require_pole_free(Complex t) {
  if (pole_distance(t) <= kPoleGuard)
    throw PoleProximity("t = " + to_string(t) + " lies within the pole guard");
}

}  // namespace

KernelParam KernelParam::make_unchecked_decay(Complex mu) {
  if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag()))
    throw BranchViolation("mu must be finite");
  if (std::abs(mu) < kMinMuMagnitude)
    throw BranchViolation("|mu| = " + std::to_string(std::abs(mu)) + " is below 1e-6");
  if (mu.imag() == 0.0 && mu.real() < 0.0)
    throw BranchViolation("mu = " + to_string(mu) +
                          " lies on the cut (-inf, 0]; the principal branch of mu^w is undefined");
  const Complex log_mu = std::log(mu);
  return KernelParam(mu, log_mu);
}

KernelParam KernelParam::make(Complex mu) {
  KernelParam p = make_unchecked_decay(mu);
  if (p.decay_rate() < kDeltaMin)
    throw BranchViolation("mu = " + to_string(mu) + " has decay rate pi - |arg mu| = " +
                          std::to_string(p.decay_rate()) + " below the minimum pi/16");
  return p;
}

double pole_distance(Complex t) {
  const double n = std::max(1.0, std::round(std::abs(t.imag())));
  const double pole = t.imag() >= 0.0 ? n : -n;
  return std::abs(t - Complex{0.0, pole});
}

Complex eval_kernel(const KernelParam& p, Complex t) {
  require_pole_free(t);
  return sinh_ratio_times_exp(t, (kI * t - 1.0) * p.log_mu());
}

Complex kernel_shift_sum(const KernelParam& p, Complex z) {
  if (z == Complex{0.0, 0.0}) throw ZeroArgument("z = 0 is a pole of i mu^{iz}/(2 sinh pi z)");
  require_pole_free(z);
  return kI * inverse_sinh_times_exp(z, kI * z * p.log_mu());
}

QuadratureSpec default_kernel_integral_spec() {
  QuadratureSpec q;
  q.rel_tolerance = 1e-13;
  q.truncation_T = 40.0;
  q.nodes_per_unit = 16;
  q.max_truncation = 80.0;
  return q;
}

Complex eval_kernel_by_integral(const KernelParam& p, double t, const QuadratureSpec& q) {
  // E = log|mu| + u; the integrand decays like e^{-|u|} on both sides.
  const double center = std::log(std::abs(p.mu()));
  const Complex mu = p.mu();
  const Complex exponent{1.0, t};
  const Density integrand = [&](Complex u) {
    const Complex e = center + u;
    const Complex denom = std::exp(e) + mu;
    return std::exp(e * exponent) / (denom * denom);
  };
  const ScalarIntegrand one = [](Complex) { return Complex{1.0, 0.0}; };
  return integrate_scalar(one, integrand, q, 1.0) / (2.0 * kPi);
}

double check_functional_eq1(const KernelParam& p, Complex t) {
  const Complex mu = p.mu();
  return std::abs(eval_kernel(p, t - 2.0 * kI) + 2.0 * mu * eval_kernel(p, t - kI) +
                  mu * mu * eval_kernel(p, t));
}

double check_functional_eq2(const KernelParam& p, Complex z) {
  if (z == Complex{0.0, 0.0}) throw ZeroArgument("functional equation requires z != 0");
  const Complex lhs = p.mu() * eval_kernel(p, z) + eval_kernel(p, z - kI);
  return std::abs(lhs - kernel_shift_sum(p, z));
}

ContourResult contour_residue_check(const KernelParam& p, double lambda, double radius,
                                    double tolerance) {
  if (!(radius > 0.0 && radius < 1.0)) throw InvalidArgument("radius must lie in (0, 1)");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");

  const double log_lambda = std::log(lambda);
  auto trapezoid = [&](int n) {
    Complex sum{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const double theta = 2.0 * kPi * k / n;
      const Complex offset = radius * std::polar(1.0, theta);
      const Complex t = kI + offset;
      // dt = i * offset * dtheta
      sum += eval_kernel(p, t) * std::exp(kI * t * log_lambda) * kI * offset;
    }
    return sum * (2.0 * kPi / n);
  };

  ContourResult out;
  out.expected = 1.0 / (lambda * p.mu() * p.mu());
  int n = 64;
  Complex previous = trapezoid(n);
  for (;;) {
    const Complex current = trapezoid(2 * n);
    n *= 2;
    if (std::abs(current - previous) <= tolerance * std::max(1.0, std::abs(current))) {
      out.loop_value = current;
      break;
    }
    if (n >= (1 << 20))
      throw QuadratureNonConvergence("trapezoidal loop integral did not settle");
    previous = current;
  }
  out.nodes = n;
  out.residual = std::abs(out.loop_value - out.expected);
  return out;
}

}  // namespace agen
