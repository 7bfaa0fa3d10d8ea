#include "pballs/tracywidom.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pballs/balls.hpp"

namespace pballs {

namespace {

// Integral of a cubic Hermite interpolant over the sub-interval
// [x, s0] of [s1, s0], given values/derivatives at both ends (h = s0 - s1).
// With u = (x - s1)/h the antiderivatives of the Hermite basis are
// H00 = u^4/2 - u^3 + u, H10 = u^4/4 - 2u^3/3 + u^2/2,
// H01 = -u^4/2 + u^3,    H11 = u^4/4 - u^3/3.
double hermite_partial(double s1, double s0, double f1, double f0, double d1,
                       double d0, double x) {
  const double h = s0 - s1;
  const double u = (x - s1) / h;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  const double H00 = 0.5 * u4 - u3 + u;
  const double H10 = 0.25 * u4 - 2.0 / 3.0 * u3 + 0.5 * u2;
  const double H01 = -0.5 * u4 + u3;
  const double H11 = 0.25 * u4 - u3 / 3.0;
  const double at1 = 0.5 * f1 + h * d1 / 12.0 + 0.5 * f0 - h * d0 / 12.0;
  const double atx = H00 * f1 + H10 * h * d1 + H01 * f0 + H11 * h * d0;
  return h * (at1 - atx);
}

struct Integrands {
  // f and f' for q, q^2 and s q^2 at a solution node.
  static double q(const PainleveSolution& s, Eigen::Index k) { return s.q[k]; }
  static double dq(const PainleveSolution& s, Eigen::Index k) { return s.qprime[k]; }
  static double q2(const PainleveSolution& s, Eigen::Index k) { return s.q[k] * s.q[k]; }
  static double dq2(const PainleveSolution& s, Eigen::Index k) {
    return 2.0 * s.q[k] * s.qprime[k];
  }
  static double sq2(const PainleveSolution& s, Eigen::Index k) {
    return s.grid[k] * s.q[k] * s.q[k];
  }
  static double dsq2(const PainleveSolution& s, Eigen::Index k) {
    return s.q[k] * s.q[k] + 2.0 * s.grid[k] * s.q[k] * s.qprime[k];
  }
};

// Cumulative integrals int_{grid[k]}^{grid[0]} of q, q^2 and s q^2 via the
// derivative-corrected trapezoid (exact for the cubic Hermite model).
void accumulate_integrals(PainleveSolution& sol) {
  const auto m = sol.grid.size();
  sol.cum_q.resize(m);
  sol.cum_q2.resize(m);
  sol.cum_sq2.resize(m);
  sol.cum_q[0] = sol.cum_q2[0] = sol.cum_sq2[0] = 0.0;
  for (Eigen::Index k = 1; k < m; ++k) {
    const double h = sol.grid[k - 1] - sol.grid[k];
    auto panel = [&](auto f, auto df) {
      return 0.5 * h * (f(sol, k - 1) + f(sol, k)) +
             h * h / 12.0 * (df(sol, k) - df(sol, k - 1));
    };
    sol.cum_q[k] = sol.cum_q[k - 1] + panel(Integrands::q, Integrands::dq);
    sol.cum_q2[k] = sol.cum_q2[k - 1] + panel(Integrands::q2, Integrands::dq2);
    sol.cum_sq2[k] = sol.cum_sq2[k - 1] + panel(Integrands::sq2, Integrands::dsq2);
  }
}

// Locate x in the descending grid: returns k with grid[k+1] <= x <= grid[k].
Eigen::Index bracket(const PainleveSolution& sol, double x) {
  Eigen::Index lo = 0, hi = sol.grid.size() - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (sol.grid[mid] >= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

struct TailIntegrals {
  double int_q;    // int_x^{s_start} q
  double int_q2;   // int_x^{s_start} q^2
  double int_sq2;  // int_x^{s_start} s q^2
};

TailIntegrals integrals_from(const PainleveSolution& sol, double x) {
  if (x > sol.s_max() || x < sol.s_min())
    throw std::invalid_argument("tw_cdf: x = " + std::to_string(x) +
                                " outside the solution range [" +
                                std::to_string(sol.s_min()) + ", " +
                                std::to_string(sol.s_max()) + "]");
  const Eigen::Index k = bracket(sol, x);
  const double s0 = sol.grid[k], s1 = sol.grid[k + 1];
  TailIntegrals t;
  t.int_q = sol.cum_q[k] + hermite_partial(s1, s0, sol.q[k + 1], sol.q[k],
                                           sol.qprime[k + 1], sol.qprime[k], x);
  t.int_q2 = sol.cum_q2[k] +
             hermite_partial(s1, s0, Integrands::q2(sol, k + 1), Integrands::q2(sol, k),
                             Integrands::dq2(sol, k + 1), Integrands::dq2(sol, k), x);
  t.int_sq2 = sol.cum_sq2[k] +
              hermite_partial(s1, s0, Integrands::sq2(sol, k + 1), Integrands::sq2(sol, k),
                              Integrands::dsq2(sol, k + 1), Integrands::dsq2(sol, k), x);
  return t;
}

}  // namespace

namespace {

// Left-tail expansion of the Hastings-McLeod branch,
// q(s) = sqrt(-s/2) (1 + 1/(8 s^3) - 73/(128 s^6) + ...); truncation is
// below 1e-7 relative for s <= -8 and ~5e-5 at s = -4.
double hm_left_asymptote(double s) {
  const double s3 = s * s * s;
  return std::sqrt(-0.5 * s) * (1.0 + 1.0 / (8.0 * s3) - 73.0 / (128.0 * s3 * s3));
}

}  // namespace

PainleveSolution solve_painleve_ii(double s_start, double s_end,
                                   const OdeStepperConfig& config, double grid_step) {
  if (!(s_start >= 6.0) || !(s_end <= -2.0) || !(s_start > s_end))
    throw std::invalid_argument(
        "solve_painleve_ii: requires s_start >= 6, s_end <= -2, s_start > s_end");
  if (s_start > 15.0)
    throw std::invalid_argument("solve_painleve_ii: Airy boundary data capped at s = 15");
  if (!(grid_step > 0.0))
    throw std::invalid_argument("solve_painleve_ii: grid step must be positive");
  config.validate();

  // Marching the decaying branch backward in double precision loses it
  // before s = -10 (perturbations near the origin amplify like
  // exp(2 sqrt(2)/3 |s|^{3/2})), so the solution is computed globally
  // instead: damped Newton on a Numerov discretization with Airy data on
  // the right and the branch asymptote on the left.
  const auto m = static_cast<Eigen::Index>(
                     std::ceil((s_start - s_end) / grid_step - 1e-9)) + 1;
  const double h = (s_start - s_end) / static_cast<double>(m - 1);

  PainleveSolution sol;
  sol.grid.resize(m);
  for (Eigen::Index k = 0; k < m; ++k)
    sol.grid[k] = s_start - h * static_cast<double>(k);
  sol.grid[m - 1] = s_end;

  Eigen::VectorXd q(m);
  q[0] = airy_ai(s_start).value;
  q[m - 1] = hm_left_asymptote(s_end);
  // Initial iterate: Airy on the right, the branch asymptote on the left,
  // a linear bridge across the matching window.
  const double bridge_hi = 1.0, bridge_lo = -2.0;
  const double v_hi = airy_ai(bridge_hi).value;
  const double v_lo = hm_left_asymptote(bridge_lo);
  for (Eigen::Index k = 1; k + 1 < m; ++k) {
    const double s = sol.grid[k];
    if (s >= bridge_hi)
      q[k] = airy_ai(s).value;
    else if (s <= bridge_lo)
      q[k] = hm_left_asymptote(s);
    else
      q[k] = v_hi + (bridge_hi - s) / (bridge_hi - bridge_lo) * (v_lo - v_hi);
  }

  const auto f = [](double s, double v) { return s * v + 2.0 * v * v * v; };
  const auto fq = [](double s, double v) { return s + 6.0 * v * v; };
  const double h2_12 = h * h / 12.0;

  auto residual = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
    for (Eigen::Index k = 1; k + 1 < m; ++k) {
      g[k - 1] = v[k + 1] - 2.0 * v[k] + v[k - 1] -
                 h2_12 * (f(sol.grid[k + 1], v[k + 1]) + 10.0 * f(sol.grid[k], v[k]) +
                          f(sol.grid[k - 1], v[k - 1]));
    }
  };

  const Eigen::Index inner = m - 2;
  Eigen::VectorXd g(inner), g_trial(inner), delta(inner);
  Eigen::VectorXd diag(inner), lower(inner), upper(inner), rhs(inner);
  Eigen::VectorXd trial(m);

  residual(q, g);
  bool converged = false;
  for (int iter = 0; iter < 60 && !converged; ++iter) {
    // Tridiagonal Newton system, solved by the Thomas algorithm.
    for (Eigen::Index k = 1; k + 1 < m; ++k) {
      const Eigen::Index i = k - 1;
      diag[i] = -2.0 - 10.0 * h2_12 * fq(sol.grid[k], q[k]);
      lower[i] = 1.0 - h2_12 * fq(sol.grid[k - 1], q[k - 1]);
      upper[i] = 1.0 - h2_12 * fq(sol.grid[k + 1], q[k + 1]);
      rhs[i] = -g[i];
    }
    for (Eigen::Index i = 1; i < inner; ++i) {
      const double w = lower[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    delta[inner - 1] = rhs[inner - 1] / diag[inner - 1];
    for (Eigen::Index i = inner - 2; i >= 0; --i)
      delta[i] = (rhs[i] - upper[i] * delta[i + 1]) / diag[i];

    // Backtracking on the residual norm keeps the iteration on the branch.
    const double g_norm = g.lpNorm<Eigen::Infinity>();
    double lambda = 1.0;
    for (;;) {
      trial = q;
      trial.segment(1, inner) += lambda * delta;
      residual(trial, g_trial);
      if (g_trial.lpNorm<Eigen::Infinity>() <= (1.0 - 0.25 * lambda) * g_norm ||
          lambda < 1.0 / 64.0)
        break;
      lambda *= 0.5;
    }
    q = trial;
    g = g_trial;

    for (Eigen::Index k = 0; k < m; ++k) {
      if (!std::isfinite(q[k]) || std::abs(q[k]) > 1e3)
        throw std::runtime_error(
            "solve_painleve_ii: iterate left the decaying branch near s = " +
            std::to_string(sol.grid[k]) + "; tighten tolerances or the grid step");
    }

    const double step_norm = lambda * delta.lpNorm<Eigen::Infinity>();
    const double q_norm = q.lpNorm<Eigen::Infinity>();
    // Either the Newton step is below tolerance, or the residual has hit
    // the roundoff floor of the second-difference evaluation.
    converged = (lambda == 1.0 &&
                 step_norm <= config.abs_tol + config.rel_tol * q_norm) ||
                g.lpNorm<Eigen::Infinity>() <=
                    64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, q_norm);
  }
  if (!converged)
    throw std::runtime_error("solve_painleve_ii: Newton iteration did not converge");

  sol.q = q;

  // dq/ds by fourth-order central differences (the grid descends in s),
  // one-sided second order at the edges.
  sol.qprime.resize(m);
  sol.qprime[0] = (3.0 * q[0] - 4.0 * q[1] + q[2]) / (2.0 * h);
  sol.qprime[1] = (q[0] - q[2]) / (2.0 * h);
  for (Eigen::Index k = 2; k + 2 < m; ++k)
    sol.qprime[k] = (-q[k - 2] + 8.0 * q[k - 1] - 8.0 * q[k + 1] + q[k + 2]) / (12.0 * h);
  sol.qprime[m - 2] = (q[m - 3] - q[m - 1]) / (2.0 * h);
  sol.qprime[m - 1] = (-3.0 * q[m - 1] + 4.0 * q[m - 2] - q[m - 3]) / (2.0 * h);

  accumulate_integrals(sol);

  // Airy tail beyond s_start; |Ai(15)|^2 < 1e-35 makes the cap immaterial
  // (remainder bound far below 1e-12).
  const QuadratureRule rule{129, QuadratureScheme::gauss_legendre};
  sol.tail_q = integrate([](double s) { return airy_ai(s).value; }, s_start, 15.0, rule);
  sol.tail_q2 = integrate(
      [](double s) {
        const double v = airy_ai(s).value;
        return v * v;
      },
      s_start, 15.0, rule);
  sol.tail_sq2 = integrate(
      [](double s) {
        const double v = airy_ai(s).value;
        return s * v * v;
      },
      s_start, 15.0, rule);
  return sol;
}

double tw_cdf(int beta, double x, const PainleveSolution& solution) {
  validate_beta(beta);
  const TailIntegrals t = integrals_from(solution, x);
  // Both exponents are integrals of nonnegative integrands; a sub-ulp
  // negative value near the right tail is roundoff, not signal. Each CDF
  // is assembled in log space and exponentiated once, which keeps the
  // tabulated values monotone through the last ulp.
  const double half_q = 0.5 * std::max(0.0, t.int_q + solution.tail_q);
  const double exponent =
      std::max(0.0, t.int_sq2 + solution.tail_sq2 - x * (t.int_q2 + solution.tail_q2));
  switch (beta) {
    case 2: return std::exp(-exponent);
    case 1: return std::exp(-half_q - 0.5 * exponent);
    default: {
      const double log_cosh = half_q < 1e-4 ? 0.5 * half_q * half_q
                                            : std::log(std::cosh(half_q));
      return std::exp(std::min(0.0, log_cosh - 0.5 * exponent));
    }
  }
}

TWTable::TWTable(int beta, Eigen::VectorXd grid, Eigen::VectorXd F)
    : beta_(beta), grid_(std::move(grid)), F_(std::move(F)) {
  validate_beta(beta_);
  const auto m = grid_.size();
  if (m < 2 || F_.size() != m)
    throw std::invalid_argument("TWTable: need matching grids with >= 2 nodes");
  for (Eigen::Index i = 1; i < m; ++i) {
    if (!(grid_[i] > grid_[i - 1]))
      throw std::invalid_argument("TWTable: grid must be strictly ascending");
    if (F_[i] < F_[i - 1])
      throw std::runtime_error(
          "TWTable: non-monotone CDF values indicate insufficient accuracy");
  }

  // Fritsch-Carlson slopes keep the interpolant monotone.
  slope_.resize(m);
  Eigen::VectorXd secant(m - 1);
  for (Eigen::Index i = 0; i < m - 1; ++i)
    secant[i] = (F_[i + 1] - F_[i]) / (grid_[i + 1] - grid_[i]);
  slope_[0] = secant[0];
  slope_[m - 1] = secant[m - 2];
  for (Eigen::Index i = 1; i < m - 1; ++i) {
    if (secant[i - 1] * secant[i] <= 0.0)
      slope_[i] = 0.0;
    else
      slope_[i] = 2.0 * secant[i - 1] * secant[i] / (secant[i - 1] + secant[i]);
  }
}

double TWTable::cdf(double x) const {
  if (x <= grid_[0]) return 0.0;
  const auto m = grid_.size();
  if (x >= grid_[m - 1]) return 1.0;
  Eigen::Index lo = 0, hi = m - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (grid_[mid] <= x)
      lo = mid;
    else
      hi = mid;
  }
  const double h = grid_[lo + 1] - grid_[lo];
  const double u = (x - grid_[lo]) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * F_[lo] + h10 * h * slope_[lo] + h01 * F_[lo + 1] +
         h11 * h * slope_[lo + 1];
}

TWTable tw_cdf_table(int beta, double x_min, double x_max, double step,
                     const PainleveSolution& solution) {
  if (!(step > 0.0) || !(x_max > x_min))
    throw std::invalid_argument("tw_cdf_table: need x_max > x_min and step > 0");
  const auto count = static_cast<Eigen::Index>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
  Eigen::VectorXd grid(count), values(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    grid[i] = std::min(x_max, x_min + step * static_cast<double>(i));
    values[i] = tw_cdf(beta, grid[i], solution);
  }
  return TWTable(beta, std::move(grid), std::move(values));
}

}  // namespace pballs
