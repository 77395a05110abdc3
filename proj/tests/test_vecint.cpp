#include <cmath>
#include <random>

#include "doctest.h"

#include "agen/errors.hpp"
#include "agen/group_models.hpp"
#include "agen/vecint.hpp"

using namespace agen;

namespace {

Density gaussian(double n) {
  return [n](Complex t) { return std::sqrt(n / kPi) * std::exp(-n * t * t); };
}

QuadratureSpec gauss_spec(double T = 8.0) {
  QuadratureSpec q;
  q.truncation_T = T;
  q.nodes_per_unit = 16;
  return q;
}

}  // namespace

TEST_SUITE("vecint") {
  TEST_CASE("Gauss-Legendre nodes integrate polynomials of degree 31") {
    const QuadratureNodes& gl = gauss_legendre_16();
    REQUIRE(gl.points.size() == 16);
    for (int p = 0; p <= 31; ++p) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 16; ++k) sum += gl.weights[k] * std::pow(gl.points[k], p);
      const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(sum - exact) < 1e-14);
    }
    for (std::size_t k = 1; k < 16; ++k) CHECK(gl.points[k] > gl.points[k - 1]);
  }

  TEST_CASE("constant integrand against a unit-mass Gaussian") {
    StateVector x(3);
    x << 1.0, Complex(0, 2), -0.5;
    const StateVector y = integrate_vector([&](Complex) { return x; }, gaussian(1.0), gauss_spec(), 1.0);
    CHECK((y - x).norm() < 1e-13);
  }

  TEST_CASE("U_t x against e^{-t^2}/sqrt(pi) gives e^{-h^2/4} x") {
    const GroupModel g = GroupModel::diagonal({2.0});
    StateVector x(1);
    x << 1.0;
    const StateVector y =
        integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, gaussian(1.0), gauss_spec(), 1.0);
    CHECK(std::abs(y(0) - std::exp(-1.0)) < 1e-13);
  }

  TEST_CASE("linearity") {
    std::mt19937_64 rng(7);
    const GroupModel g = random_hermitian_model(4, 2.0, rng);
    const StateVector a = random_unit_vector(4, rng), b = random_unit_vector(4, rng);
    const Complex alpha{0.3, -1.7};
    auto f = [&](Complex t) { return apply_Uz(g, t, a); };
    auto h = [&](Complex t) { return StateVector(apply_Uz(g, 2.0 * t, b)); };
    const QuadratureSpec q = gauss_spec();
    const StateVector lhs =
        integrate_vector([&](Complex t) { return StateVector(alpha * f(t) + h(t)); }, gaussian(2.0), q, 1.0);
    const StateVector rhs = alpha * integrate_vector(f, gaussian(2.0), q, 1.0) +
                            integrate_vector(h, gaussian(2.0), q, 1.0);
    CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
  }

  TEST_CASE("pairing consistency") {
    std::mt19937_64 rng(13);
    std::vector<StateVector> probes{random_unit_vector(2, rng), random_unit_vector(2, rng),
                                    random_unit_vector(2, rng)};
    const StateVector c = random_unit_vector(2, rng);
    CHECK(pairing_consistency_check([&](Complex) { return c; }, gaussian(1.0), gauss_spec(), 1.0,
                                    probes) <= 1e-13);
    const GroupModel g = GroupModel::diagonal({5.0, -5.0});
    CHECK(pairing_consistency_check([&](Complex t) { return apply_Uz(g, t, c); }, gaussian(1.0),
                                    gauss_spec(), 1.0, probes) <= 1e-10);
    const Density zero = [](Complex) { return Complex{}; };
    const StateVector y = integrate_vector([&](Complex) { return c; }, zero, gauss_spec(), 1.0);
    CHECK(y.norm() == 0.0);
    CHECK(pairing_consistency_check([&](Complex) { return c; }, zero, gauss_spec(), 1.0, probes) == 0.0);
  }

  TEST_CASE("refinement stability") {
    const GroupModel g = GroupModel::diagonal({1.5, -0.7, 3.0});
    const StateVector x = StateVector::Ones(3);
    const Density d = [](Complex t) { return 0.5 / std::cosh(t); };  // integrand decays like e^{-|t|}
    QuadratureSpec q = default_quadrature_spec(1.0, 1e-12);
    const VectorIntegral a = integrate_vector_detailed([&](Complex t) { return apply_Uz(g, t, x); }, d, q, 1.0);
    q.nodes_per_unit *= 2;
    q.truncation_T *= 2.0;
    q.max_truncation = std::max(q.max_truncation, q.truncation_T);
    const StateVector b = integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, d, q, 1.0);
    CHECK((a.value - b).norm() <= 2e-12 * a.value.norm());
    // Exact value: int e^{ith}/(2 cosh t) dt = pi/(2 cosh(pi h/2)).
    for (int k = 0; k < 3; ++k) {
      const double h = g.spectrum()(k);
      CHECK(std::abs(b(k) - kPi / (2.0 * std::cosh(kPi * h / 2.0))) < 1e-11);
    }
  }

  TEST_CASE("shift invariance for holomorphic integrands") {
    const GroupModel g = GroupModel::diagonal({1.0, -2.0});
    const StateVector x = StateVector::Ones(2);
    const Density d = gaussian(1.0);
    QuadratureSpec q = gauss_spec(9.0);
    const StateVector base = integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, d, q, 1.0);
    for (const double s : {-0.6, 0.3, 0.8}) {
      q.line_offset_s = s;
      const StateVector shifted = integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, d, q, 1.0);
      CHECK((shifted - base).norm() <= 1e-11 * base.norm());
    }
  }

  TEST_CASE("tanh-sinh rule agrees with Gauss panels") {
    const GroupModel g = GroupModel::diagonal({0.8});
    const StateVector x = StateVector::Ones(1);
    QuadratureSpec q = gauss_spec();
    const StateVector a = integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, gaussian(1.0), q, 1.0);
    q.rule = QuadratureRule::TanhSinh;
    const StateVector b = integrate_vector([&](Complex t) { return apply_Uz(g, t, x); }, gaussian(1.0), q, 1.0);
    CHECK((a - b).norm() < 1e-12);
  }

  TEST_CASE("errors") {
    const StateVector x = StateVector::Ones(1);
    QuadratureSpec q = gauss_spec(2.0);
    q.max_truncation = 4.0;
    const Density slow = [](Complex t) { return 1.0 / (1.0 + t * t); };
    CHECK_THROWS_AS((void)integrate_vector([&](Complex) { return x; }, slow, q, 1.0), QuadratureNonConvergence);
    const Density nan = [](Complex t) { return t.real() > 0.5 ? Complex(NAN, 0) : Complex(1.0); };
    CHECK_THROWS_AS((void)integrate_vector([&](Complex) { return x; }, nan, gauss_spec(), 1.0), NonFiniteSample);
    QuadratureSpec bad;
    bad.truncation_T = 0.5;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = QuadratureSpec{};
    bad.rel_tolerance = 1e-16;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS((void)integrate_vector([&](Complex) { return x; }, gaussian(1.0), gauss_spec(), 0.0),
                    InvalidArgument);
  }

  TEST_CASE("default settings follow T = max(1, log(1/tol)/rate)") {
    CHECK(default_quadrature_spec(1.0, 1e-12).truncation_T == doctest::Approx(std::log(1e12)));
    CHECK(default_quadrature_spec(100.0, 1e-12).truncation_T == 1.0);
    CHECK(default_quadrature_spec(1.0).nodes_per_unit == 8);
  }
}
