#include <doctest.h>

#include <cmath>
#include <vector>

#include "pballs/specfun.hpp"

using namespace pballs;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("log_gamma anchors") {
  CHECK(std::abs(log_gamma(1.0)) <= 1e-12);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-13));

  // exact factorial oracle: Gamma(10) = 9!
  long long fact = 1;
  for (int k = 2; k <= 9; ++k) fact *= k;
  CHECK(std::abs(log_gamma(10.0) - std::log(static_cast<double>(fact))) <= 1e-12);

  // std::lgamma as an independent cross-check on a wide grid
  for (double x : {1e-6, 1e-3, 0.25, 1.0, 3.7, 25.0, 1e3, 1e6, 1e9}) {
    const double mine = log_gamma(x);
    const double ref = std::lgamma(x);
    CHECK(std::abs(mine - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("log_gamma domain errors") {
  CHECK_THROWS_AS(log_gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(log_gamma(-3.5), std::invalid_argument);
  CHECK_THROWS_AS(log_gamma(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("log_gamma recurrence on a log-spaced grid") {
  // lgamma(x+1) = lgamma(x) + ln x; tolerance is relative to the value
  // magnitude once |lgamma| exceeds 1 (the difference of two large
  // rounded values cannot beat their ulp).
  for (double x = 0.1; x <= 1e6; x *= 1.7) {
    const double lhs = log_gamma(x + 1.0);
    const double rhs = log_gamma(x) + std::log(x);
    const double tol = 1e-11 * std::max(1.0, std::abs(lhs));
    CHECK(std::abs(lhs - rhs) <= tol);
  }
}

TEST_CASE("log_gamma duplication identity") {
  // Legendre duplication: lgamma(2x) = lgamma(x) + lgamma(x+1/2)
  //                                    + (2x-1) ln 2 - (1/2) ln pi.
  for (double x = 0.5; x <= 100.0; x *= 1.31) {
    const double lhs = log_gamma(2.0 * x);
    const double rhs = log_gamma(x) + log_gamma(x + 0.5) +
                       (2.0 * x - 1.0) * std::log(2.0) - 0.5 * std::log(kPi);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

namespace {

// Independent Maclaurin oracle for Ai at small |x|:
// Ai = c1 f - c2 g with f, g the standard Airy power series.
double airy_maclaurin_oracle(double x, bool derivative) {
  const double c1 = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
  const double c2 = 1.0 / (std::pow(3.0, 1.0 / 3.0) * std::tgamma(1.0 / 3.0));
  double term_f = 1.0, term_g = x;
  double f = 1.0, g = x, fp = 0.0, gp = 1.0;
  for (int k = 1; k <= 80; ++k) {
    term_f *= x * x * x / ((3.0 * k) * (3.0 * k - 1.0));
    term_g *= x * x * x / ((3.0 * k) * (3.0 * k + 1.0));
    f += term_f;
    g += term_g;
    if (x != 0.0) {
      fp += term_f * 3.0 * k / x;
      gp += term_g * (3.0 * k + 1.0) / x;
    }
  }
  if (x == 0.0) return derivative ? -c2 : c1;
  return derivative ? c1 * fp - c2 * gp : c1 * f - c2 * g;
}

}  // namespace

TEST_CASE("airy_ai values at the origin") {
  const AiryValue v = airy_ai(0.0);
  CHECK(v.value == doctest::Approx(airy_maclaurin_oracle(0.0, false)).epsilon(1e-12));
  CHECK(v.derivative ==
        doctest::Approx(airy_maclaurin_oracle(0.0, true)).epsilon(1e-12));
  CHECK(v.value == doctest::Approx(0.3550280539).epsilon(1e-9));
  CHECK(v.derivative == doctest::Approx(-0.2588194038).epsilon(1e-9));
}

TEST_CASE("airy_ai matches the Maclaurin oracle on [-4, 4]") {
  for (double x = -4.0; x <= 4.0; x += 0.37) {
    const AiryValue v = airy_ai(x);
    CHECK(std::abs(v.value - airy_maclaurin_oracle(x, false)) <= 1e-11);
    CHECK(std::abs(v.derivative - airy_maclaurin_oracle(x, true)) <= 1e-11);
  }
}

TEST_CASE("airy_ai decaying branch is monotone on [2, 15]") {
  double prev = airy_ai(2.0).value;
  CHECK(prev > 0.0);
  for (double x = 2.1; x <= 15.0; x += 0.1) {
    const double v = airy_ai(x).value;
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(airy_ai(15.0).value < 1e-12);
}

TEST_CASE("airy_ai satisfies the ODE under finite differences") {
  // Five-point second-derivative stencil, error ~ h^4 f^(6)/90 + roundoff.
  const double h = 5e-3;
  for (double x = -14.0; x <= 14.0; x += 0.7) {
    const double f2 = (-airy_ai(x + 2 * h).value + 16.0 * airy_ai(x + h).value -
                       30.0 * airy_ai(x).value + 16.0 * airy_ai(x - h).value -
                       airy_ai(x - 2 * h).value) /
                      (12.0 * h * h);
    CHECK(std::abs(f2 - x * airy_ai(x).value) <= 1e-8);
  }
}

TEST_CASE("airy_ai derivative is consistent with the value") {
  const double h = 1e-5;
  for (double x : {-12.0, -6.3, -1.0, 0.7, 3.9, 7.5, 12.0}) {
    const double fd = (airy_ai(x + h).value - airy_ai(x - h).value) / (2.0 * h);
    CHECK(std::abs(fd - airy_ai(x).derivative) <= 1e-8);
  }
}

TEST_CASE("airy_ai domain errors") {
  CHECK_THROWS_AS(airy_ai(15.5), std::invalid_argument);
  CHECK_THROWS_AS(airy_ai(-15.5), std::invalid_argument);
  CHECK_THROWS_AS(airy_ai(std::nan("")), std::invalid_argument);
}

TEST_CASE("integrate constants and polynomials") {
  for (QuadratureScheme scheme :
       {QuadratureScheme::composite_simpson, QuadratureScheme::gauss_legendre}) {
    QuadratureRule rule{65, scheme};
    CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0, rule) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double) { return 1.0; }, -3.5, 7.25, rule) ==
          doctest::Approx(10.75).epsilon(1e-12));
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, rule) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("integrate Gaussian against the analytic oracle") {
  const double got = integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0,
                               QuadratureRule{129, QuadratureScheme::gauss_legendre});
  CHECK(got == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
}

TEST_CASE("integrate propagates NaN with the offending location") {
  auto bad = [](double x) { return x > 0.4 && x < 0.6 ? std::nan("") : 1.0; };
  CHECK_THROWS_WITH_AS(integrate(bad, 0.0, 1.0), doctest::Contains("NaN"),
                       std::runtime_error);
}

TEST_CASE("integrate rejects bad rules and reversed limits") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, QuadratureRule{2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("ode_integrate hits standard solutions") {
  OdeStepperConfig cfg{0.1, 1e-12, 1e-14};
  auto decay = [](double, const Eigen::Matrix<double, 1, 1>& y) {
    return Eigen::Matrix<double, 1, 1>(-y[0]);
  };
  Eigen::Matrix<double, 1, 1> y0(1.0);
  CHECK(ode_integrate<1>(decay, 0.0, 2.0, y0, cfg)[0] ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-10));

  // harmonic oscillator, backward integration
  auto osc = [](double, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y[1], -y[0]);
  };
  const Eigen::Vector2d at_pi =
      ode_integrate<2>(osc, 0.0, kPi, Eigen::Vector2d(1.0, 0.0), cfg);
  CHECK(at_pi[0] == doctest::Approx(-1.0).epsilon(1e-10));
  const Eigen::Vector2d back =
      ode_integrate<2>(osc, kPi, 0.0, at_pi, cfg);
  CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ode config validation") {
  CHECK_THROWS_AS(OdeStepperConfig({-0.1, 1e-10, 1e-12}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(OdeStepperConfig({0.1, 0.5, 1e-12}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(OdeStepperConfig({0.1, 1e-10, 0.0}).validate(),
                  std::invalid_argument);
}
