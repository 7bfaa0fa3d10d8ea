#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pballs/tracywidom.hpp"

using namespace pballs;

namespace {

double q_at(const PainleveSolution& s, double x) {
  Eigen::Index best = 0;
  double dist = 1e300;
  for (Eigen::Index k = 0; k < s.grid.size(); ++k) {
    if (std::abs(s.grid[k] - x) < dist) {
      dist = std::abs(s.grid[k] - x);
      best = k;
    }
  }
  REQUIRE(dist < 1e-9);
  return s.q[best];
}

// Independent oracle: classical fixed-step RK4 marched from the Airy data
// at s = 8 down to 0, the direction-stable part of the branch.
double rk4_q0(double h) {
  auto f = [](double s, double q, double p) {
    return std::pair<double, double>(p, s * q + 2.0 * q * q * q);
  };
  const AiryValue a = airy_ai(8.0);
  double s = 8.0, q = a.value, p = a.derivative;
  const auto steps = static_cast<long long>(std::round(8.0 / h));
  for (long long i = 0; i < steps; ++i) {
    const auto [k1q, k1p] = f(s, q, p);
    const auto [k2q, k2p] = f(s - h / 2, q - h / 2 * k1q, p - h / 2 * k1p);
    const auto [k3q, k3p] = f(s - h / 2, q - h / 2 * k2q, p - h / 2 * k2p);
    const auto [k4q, k4p] = f(s - h, q - h * k3q, p - h * k3p);
    q -= h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    p -= h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    s -= h;
  }
  return q;
}

}  // namespace

TEST_CASE("painleve solution basics") {
  const PainleveSolution sol = solve_painleve_ii();
  CHECK(sol.s_max() == 8.0);
  CHECK(sol.s_min() == -10.0);

  // boundary data is the Airy function by construction
  CHECK(sol.q[0] == doctest::Approx(airy_ai(8.0).value).epsilon(1e-4));
  CHECK(sol.qprime[0] == doctest::Approx(airy_ai(8.0).derivative).epsilon(1e-3));

  // positive everywhere; monotone increase as s decreases below 0
  double prev = -1.0;
  for (Eigen::Index k = 0; k < sol.grid.size(); ++k) {
    CHECK(sol.q[k] > 0.0);
    if (sol.grid[k] < 0.0) {
      CHECK(sol.q[k] > prev);
      prev = sol.q[k];
    }
  }

  CHECK(q_at(sol, -4.0) > q_at(sol, 0.0));
  CHECK(q_at(sol, 0.0) > q_at(sol, 4.0));
}

TEST_CASE("q(0) against the independent RK4 oracle") {
  const double coarse = rk4_q0(1e-3);
  const double fine = rk4_q0(5e-4);
  // the oracle itself must be stable to 5 significant digits
  CHECK(std::abs(fine - coarse) <= 1e-8);
  CHECK(fine == doctest::Approx(0.36706).epsilon(2e-5));

  const PainleveSolution sol = solve_painleve_ii();
  CHECK(q_at(sol, 0.0) == doctest::Approx(fine).epsilon(1e-7));
}

TEST_CASE("left end sits on the branch asymptote") {
  const PainleveSolution sol = solve_painleve_ii();
  const double s = -10.0;
  const double asym = std::sqrt(-s / 2.0) *
                      (1.0 + 1.0 / (8.0 * s * s * s) -
                       73.0 / (128.0 * std::pow(s, 6.0)));
  CHECK(q_at(sol, -10.0) == doctest::Approx(asym).epsilon(1e-9));
}

TEST_CASE("solver input validation") {
  CHECK_THROWS_AS(solve_painleve_ii(5.0, -10.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_painleve_ii(8.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_painleve_ii(16.0, -10.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_painleve_ii(8.0, -10.0, OdeStepperConfig{0.01, 1.0, 1e-12}),
                  std::invalid_argument);
}

TEST_CASE("tracy-widom anchors at x = 0") {
  const PainleveSolution sol = solve_painleve_ii();
  CHECK(std::abs(tw_cdf(1, 0.0, sol) - 0.831908) <= 5e-4);
  CHECK(std::abs(tw_cdf(2, 0.0, sol) - 0.969373) <= 5e-4);
  CHECK(std::abs(tw_cdf(4, 0.0, sol) - 0.998574) <= 5e-4);
  const double f2 = tw_cdf(2, 0.0, sol);
  CHECK(std::abs(f2 * f2 - 0.939684) <= 1e-3);
}

TEST_CASE("tw_cdf domain and range") {
  const PainleveSolution sol = solve_painleve_ii();
  CHECK_THROWS_AS(tw_cdf(2, 9.0, sol), std::invalid_argument);
  CHECK_THROWS_AS(tw_cdf(2, -11.0, sol), std::invalid_argument);
  CHECK_THROWS_AS(tw_cdf(3, 0.0, sol), std::invalid_argument);
  for (double x = -10.0; x <= 8.0; x += 0.5) {
    for (int beta : {1, 2, 4}) {
      const double f = tw_cdf(beta, x, sol);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }
  CHECK(tw_cdf(2, -10.0, sol) < 1e-5);
  CHECK(tw_cdf(2, 6.0, sol) > 0.99999);
}

TEST_CASE("tables are monotone with locked tails") {
  const PainleveSolution sol = solve_painleve_ii();
  for (int beta : {1, 2, 4}) {
    const TWTable table = tw_cdf_table(beta, -10.0, 8.0, 0.05, sol);
    const auto& f = table.values();
    CHECK(f[0] < 1e-6);
    CHECK(f[f.size() - 1] > 1.0 - 1e-6);
    for (Eigen::Index i = 1; i < f.size(); ++i) CHECK(f[i] >= f[i - 1]);

    // numerical density is positive on the bulk
    for (double x = -6.0; x <= 4.0 - 0.1; x += 0.1) {
      CHECK(table.cdf(x + 0.05) - table.cdf(x - 0.05) > 0.0);
    }
  }
}

TEST_CASE("table interpolation is monotone between nodes and clamps outside") {
  const PainleveSolution sol = solve_painleve_ii();
  const TWTable table = tw_cdf_table(2, -8.0, 6.0, 0.25, sol);
  double prev = -1.0;
  for (double x = -9.0; x <= 7.0; x += 0.01) {
    const double v = table.cdf(x);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  CHECK(table.cdf(-9.5) == 0.0);
  CHECK(table.cdf(7.5) == 1.0);
}

TEST_CASE("refinement stability of the CDF") {
  // halving the mesh and the tail quadrature nodes moves nothing by 1e-5
  const PainleveSolution coarse = solve_painleve_ii(8.0, -10.0, {}, 0.01);
  const OdeStepperConfig tight{0.005, 1e-11, 1e-13};
  const PainleveSolution fine = solve_painleve_ii(8.0, -10.0, tight, 0.005);
  for (double x : {-4.0, -2.0, 0.0, 2.0}) {
    for (int beta : {1, 2, 4}) {
      CHECK(std::abs(tw_cdf(beta, x, coarse) - tw_cdf(beta, x, fine)) < 1e-5);
    }
  }
}

TEST_CASE("cdf values between grid nodes interpolate the integrals") {
  const PainleveSolution sol = solve_painleve_ii();
  // x chosen off the solution grid
  const double a = tw_cdf(2, 0.0037, sol);
  const double lo = tw_cdf(2, 0.0, sol), hi = tw_cdf(2, 0.01, sol);
  CHECK(a >= lo);
  CHECK(a <= hi);
}
