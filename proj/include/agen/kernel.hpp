#pragma once

#include "agen/types.hpp"
#include "agen/vecint.hpp"

namespace agen {

/// Below this |t| the factor t/(e^{pi t} - e^{-pi t}) is evaluated by its
/// Taylor series.
inline constexpr double kSeriesSwitchRadius = 1e-2;
/// Minimum distance from the poles {+-n i : n >= 1}.
inline constexpr double kPoleGuard = 1e-3;
/// Minimum decay rate pi - |arg mu| accepted by evaluation routines.
inline constexpr double kDeltaMin = kPi / 16.0;
inline constexpr double kMinMuMagnitude = 1e-6;

/// The parameter mu of the kernel, restricted to C minus (-inf, 0]. All
/// powers mu^w use the principal logarithm.
class KernelParam {
 public:
  /// Throws BranchViolation when mu lies on (-inf, 0], when |mu| < 1e-6 or
  /// when the decay rate pi - |arg mu| is below kDeltaMin.
  static KernelParam make(Complex mu);

  /// Same as make() without the decay-rate floor; for scalar identities
  /// that do not integrate over the kernel.
  static KernelParam make_unchecked_decay(Complex mu);

  [[nodiscard]] Complex mu() const { return mu_; }
  [[nodiscard]] double arg_mu() const { return log_mu_.imag(); }
  [[nodiscard]] double decay_rate() const { return kPi - std::abs(log_mu_.imag()); }
  /// Principal Log mu.
  [[nodiscard]] Complex log_mu() const { return log_mu_; }
  /// Principal mu^w = exp(w Log mu).
  [[nodiscard]] Complex power(Complex w) const { return std::exp(w * log_mu_); }

 private:
  KernelParam(Complex mu, Complex log_mu) : mu_(mu), log_mu_(log_mu) {}
  Complex mu_;
  Complex log_mu_;
};

/// Distance from t to the nearest pole +-n i, n >= 1.
double pole_distance(Complex t);

/// F_mu(t) = t mu^{it-1} / (e^{pi t} - e^{-pi t}), holomorphic off {+-n i}.
/// Throws PoleProximity within kPoleGuard of a pole.
Complex eval_kernel(const KernelParam& p, Complex t);

/// i mu^{iz} / (e^{pi z} - e^{-pi z}); the right-hand side of
/// mu F(z) + F(z - i) = i mu^{iz}/(e^{pi z} - e^{-pi z}).
Complex kernel_shift_sum(const KernelParam& p, Complex z);

/// Quadrature settings for the integral representation over E.
QuadratureSpec default_kernel_integral_spec();

/// F_mu(t) from (1/2pi) int e^{E(1+it)} / (e^E + mu)^2 dE, an oracle
/// independent of the closed form.
Complex eval_kernel_by_integral(const KernelParam& p, double t,
                                const QuadratureSpec& q = default_kernel_integral_spec());

/// |F(t - 2i) + 2 mu F(t - i) + mu^2 F(t)|.
double check_functional_eq1(const KernelParam& p, Complex t);

/// |mu F(z) + F(z - i) - i mu^{iz}/(e^{pi z} - e^{-pi z})|. Throws
/// ZeroArgument for z = 0.
double check_functional_eq2(const KernelParam& p, Complex z);

struct ContourResult {
  Complex loop_value;
  Complex expected;  // lambda^{-1} / mu^2
  double residual = 0.0;
  int nodes = 0;
};

/// Integral of F_mu(t) lambda^{it} counterclockwise around the circle
/// |t - i| = radius, compared with 2 pi i Res_{t=i} = lambda^{-1}/mu^2.
/// Uses the periodic trapezoidal rule, doubled until two levels agree.
ContourResult contour_residue_check(const KernelParam& p, double lambda, double radius,
                                    double tolerance = 1e-12);

}  // namespace agen
