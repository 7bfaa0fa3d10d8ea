#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pballs {

/// ln Gamma(x) for x > 0, accurate to machine precision in the relative
/// sense (absolute error <= 1e-12 wherever |ln Gamma| <= ~1e3).
double log_gamma(double x);

struct AiryValue {
  double value;
  double derivative;
};

/// Ai(x) and Ai'(x) on [-15, 15], decaying branch for x > 0.
/// Absolute error <= 1e-10 across the supported range.
AiryValue airy_ai(double x);

enum class QuadratureScheme { composite_simpson, gauss_legendre };

struct QuadratureRule {
  int nodes = 65;
  QuadratureScheme scheme = QuadratureScheme::gauss_legendre;

  void validate() const {
    if (nodes < 3) throw std::invalid_argument("QuadratureRule: nodes must be >= 3");
  }
};

namespace detail {

// Legendre nodes/weights on [-1, 1] by Newton iteration from Chebyshev
// initial guesses.
void gauss_legendre_nodes(int m, std::vector<double>& x, std::vector<double>& w);

[[noreturn]] inline void throw_nan_at(double x) {
  throw std::runtime_error("integrate: integrand returned NaN at x = " +
                           std::to_string(x));
}

}  // namespace detail

/// Quadrature of f over [a, b]. Relative error <= 1e-9 for smooth
/// integrands at the default node count; raise `nodes` for hard cases.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureRule& rule = {}) {
  rule.validate();
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  if (a == b) return 0.0;

  auto eval = [&](double x) {
    double v = f(x);
    if (std::isnan(v)) detail::throw_nan_at(x);
    return v;
  };

  if (rule.scheme == QuadratureScheme::composite_simpson) {
    int m = rule.nodes;
    if (m % 2 == 0) ++m;  // odd node count for an even panel count
    const double h = (b - a) / (m - 1);
    double s = eval(a) + eval(b);
    for (int i = 1; i < m - 1; ++i) s += eval(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
  }

  std::vector<double> x, w;
  detail::gauss_legendre_nodes(rule.nodes, x, w);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < rule.nodes; ++i) s += w[i] * eval(mid + half * x[i]);
  return s * half;
}

struct OdeStepperConfig {
  double initial_step = 0.01;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;

  void validate() const {
    if (!(initial_step > 0.0))
      throw std::invalid_argument("OdeStepperConfig: initial step must be positive");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2))
      throw std::invalid_argument("OdeStepperConfig: tolerances must lie in (0, 1e-2]");
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to t1.
/// Either direction of integration is allowed. Steps never overshoot t1.
template <int N, class F>
Eigen::Matrix<double, N, 1> ode_integrate(F&& f, double t0, double t1,
                                          Eigen::Matrix<double, N, 1> y,
                                          const OdeStepperConfig& cfg = {}) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using T = detail::Dopri5;
  cfg.validate();
  if (t0 == t1) return y;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(cfg.initial_step, std::abs(t1 - t0));
  Vec k1 = f(t, y);
  long long rejected_in_a_row = 0;

  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + h) > dir * t1) h = t1 - t;

    Vec k2 = f(t + T::c2 * h, Vec(y + h * (T::a21 * k1)));
    Vec k3 = f(t + T::c3 * h, Vec(y + h * (T::a31 * k1 + T::a32 * k2)));
    Vec k4 = f(t + T::c4 * h, Vec(y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)));
    Vec k5 = f(t + T::c5 * h,
               Vec(y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)));
    Vec k6 = f(t + h, Vec(y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                   T::a64 * k4 + T::a65 * k5)));
    Vec y5 = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    Vec k7 = f(t + h, y5);
    Vec err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 +
                   T::e7 * k7);

    double scale = 0.0;
    for (int i = 0; i < N; ++i) {
      double tol = cfg.abs_tol +
                   cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      scale = std::max(scale, std::abs(err[i]) / tol);
    }

    if (scale <= 1.0 || !std::isfinite(scale)) {
      if (!std::isfinite(scale))
        throw std::runtime_error("ode_integrate: non-finite state at t = " +
                                 std::to_string(t));
      t += h;
      y = y5;
      k1 = k7;  // first-same-as-last
      rejected_in_a_row = 0;
      double grow = scale > 0.0 ? 0.9 * std::pow(scale, -0.2) : 5.0;
      h *= std::min(5.0, std::max(0.2, grow));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(scale, -0.2));
      if (++rejected_in_a_row > 60)
        throw std::runtime_error("ode_integrate: step size underflow at t = " +
                                 std::to_string(t));
    }
  }
  return y;
}

}  // namespace pballs
