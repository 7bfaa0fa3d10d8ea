#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pballs/balls.hpp"
#include "pballs/estimators.hpp"
#include "pballs/sampling.hpp"
#include "pballs/specfun.hpp"

using namespace pballs;

namespace {

const NormOrder kInf = NormOrder::infinity();

// Tensor-product Simpson quadrature of g over [-L, L]^2; handles the
// |x - y|^beta kink well enough at this node count.
template <class G>
double quad2d(G&& g, double L, int nodes) {
  const QuadratureRule rule{nodes, QuadratureScheme::composite_simpson};
  return integrate(
      [&](double x) {
        return integrate([&](double y) { return g(x, y); }, -L, L, rule);
      },
      -L, L, rule);
}

double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("generalized Gaussian moments") {
  RandomStream rng(11, 0);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0, sumabs = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_generalized_gaussian(2.0, rng);
    sum += x;
    sumsq += x * x;
  }
  // density ~ e^{-x^2}: mean 0, variance 1/2 (Gaussian-integral oracle)
  CHECK(std::abs(sum / n) < 4.0 * std::sqrt(0.5 / n));
  CHECK(std::abs(sumsq / n - 0.5) < 0.01 * 0.5);

  for (int i = 0; i < n; ++i)
    sumabs += std::abs(sample_generalized_gaussian(1.0, rng));
  // density e^{-|x|}/2 is Laplace(1): E|X| = 1
  CHECK(std::abs(sumabs / n - 1.0) < 0.01);
}

TEST_CASE("uniform lp-ball samples stay inside and follow the radial law") {
  RandomStream rng(12, 0);
  const int n_draws = 100000;
  long long inside = 0;
  for (int i = 0; i < n_draws; ++i) {
    const LpSample z = sample_uniform_lp_ball(NormOrder(1.5), 5, rng);
    const double norm = lp_norm(z.coordinates, z.p);
    CHECK(norm <= 1.0 + 1e-12);
    if (norm <= 0.9) ++inside;
  }
  // P[||Z|| <= r] = r^n
  const double target = std::pow(0.9, 5);
  const double se = std::sqrt(target * (1.0 - target) / n_draws);
  CHECK(std::abs(static_cast<double>(inside) / n_draws - target) <= 3.0 * se);
}

TEST_CASE("uniform cube samples are product-uniform") {
  RandomStream rng(13, 0);
  const int n_draws = 100000;
  long long both_positive = 0;
  for (int i = 0; i < n_draws; ++i) {
    const LpSample z = sample_uniform_lp_ball(kInf, 2, rng);
    CHECK(lp_norm(z.coordinates, kInf) <= 1.0);
    if (z.coordinates[0] > 0.0 && z.coordinates[1] > 0.0) ++both_positive;
  }
  const double se = std::sqrt(0.25 * 0.75 / n_draws);
  CHECK(std::abs(both_positive / static_cast<double>(n_draws) - 0.25) <= 3.0 * se);
}

TEST_CASE("tridiagonal eigenvalues against closed forms") {
  Eigen::VectorXd d1(1);
  d1 << 3.25;
  CHECK(symmetric_tridiagonal_eigenvalues(d1, Eigen::VectorXd()).size() == 1);
  CHECK(symmetric_tridiagonal_eigenvalues(d1, Eigen::VectorXd())[0] == 3.25);

  Eigen::VectorXd d2(2), s2(1);
  d2 << 0.0, 0.0;
  s2 << 1.0;
  const Eigen::VectorXd e2 = symmetric_tridiagonal_eigenvalues(d2, s2);
  CHECK(e2[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e2[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Toeplitz tridiagonal (2 on the diagonal, -1 off): eigenvalues
  // 2 - 2 cos(k pi / 4), the characteristic-polynomial closed form.
  Eigen::VectorXd d3(3), s3(2);
  d3 << 2.0, 2.0, 2.0;
  s3 << -1.0, -1.0;
  const Eigen::VectorXd e3 = symmetric_tridiagonal_eigenvalues(d3, s3);
  CHECK(e3[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(e3[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e3[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(symmetric_tridiagonal_eigenvalues(d3, s2), std::invalid_argument);
}

TEST_CASE("beta-ensemble second moment matches d_n/2") {
  // Radial homogeneity of e^{-||x||^2} times a homogeneous factor gives
  // E ||X||^2 = d_n / 2 exactly.
  struct Case { int beta, n, draws; };
  for (const Case& c : {Case{2, 5, 100000}, Case{1, 3, 100000}}) {
    RandomStream rng(14, static_cast<std::uint64_t>(c.beta) * 100 + c.n);
    const double target = schatten_dimension(c.beta, c.n) / 2.0;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < c.draws; ++i) {
      const EigSample s = sample_beta_hermite_eigs(c.beta, c.n, rng);
      const double v = s.values.squaredNorm();
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / c.draws;
    const double se = std::sqrt((sumsq / c.draws - mean * mean) / c.draws);
    CHECK(std::abs(mean - target) <= 4.0 * se);
  }
}

TEST_CASE("beta-ensemble second moment against 2-D quadrature at n = 2") {
  // Independent oracle: E ||X||^2 under f(x, y) = e^{-x^2-y^2} |x-y|^beta
  // by tensor quadrature, compared with d_2/2 and with the sampler.
  for (int beta : {1, 2, 4}) {
    auto dens = [beta](double x, double y) {
      return std::exp(-x * x - y * y) * std::pow(std::abs(x - y), beta);
    };
    const double mass = quad2d(dens, 6.0, 801);
    const double second = quad2d(
        [&](double x, double y) { return (x * x + y * y) * dens(x, y); }, 6.0, 801);
    const double target = schatten_dimension(beta, 2) / 2.0;
    CHECK(second / mass == doctest::Approx(target).epsilon(2e-4));

    RandomStream rng(15, static_cast<std::uint64_t>(beta));
    double sum = 0.0;
    const int draws = 40000;
    for (int i = 0; i < draws; ++i)
      sum += sample_beta_hermite_eigs(beta, 2, rng).values.squaredNorm();
    // sd of ||X||^2 at n = 2 is a few units; generous 4-sigma window
    CHECK(std::abs(sum / draws - second / mass) <= 4.0 * 3.0 / std::sqrt(draws));
  }
}

TEST_CASE("tridiagonal sampler agrees with the dense GUE oracle") {
  const int n = 4, draws = 100000;
  RandomStream rng_tri(16, 0), rng_dense(16, 1);
  std::vector<double> max_tri(draws), max_dense(draws);
  for (int i = 0; i < draws; ++i) {
    max_tri[i] = sample_beta_hermite_eigs(2, n, rng_tri).values.maxCoeff();
    max_dense[i] = sample_gue_dense_eigs(n, rng_dense).values.maxCoeff();
  }
  const double ks = ks_distance_two_sample(EmpiricalCDF(std::move(max_tri)),
                                           EmpiricalCDF(std::move(max_dense)));
  CHECK(ks <= 0.02);
}

TEST_CASE("dense GUE 1x1 case reads the density off directly") {
  RandomStream rng(17, 0);
  const int draws = 1000000;
  double sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_gue_dense_eigs(1, rng).values[0];
    sumsq += x * x;
  }
  // density ~ e^{-x^2}: variance 1/2
  CHECK(std::abs(sumsq / draws - 0.5) <= 0.01 * 0.5);
}

TEST_CASE("dense GUE spacing moment matches 2-D quadrature at n = 2") {
  auto dens = [](double x, double y) {
    return std::exp(-x * x - y * y) * (x - y) * (x - y);
  };
  const double mass = quad2d(dens, 6.0, 601);
  const double spacing_sq =
      quad2d([&](double x, double y) { return (x - y) * (x - y) * dens(x, y); }, 6.0,
             601) /
      mass;

  RandomStream rng(18, 0);
  const int draws = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const EigSample s = sample_gue_dense_eigs(2, rng);
    const double gap2 = (s.values[1] - s.values[0]) * (s.values[1] - s.values[0]);
    sum += gap2;
    sumsq += gap2 * gap2;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - spacing_sq) <= 3.0 * se);
}

TEST_CASE("dense GUE trace moment at n = 6") {
  RandomStream rng(19, 0);
  const int n = 6, draws = 20000;
  const double target = schatten_dimension(2, n) / 2.0;  // n^2 / 2
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = sample_gue_dense_eigs(n, rng).values.squaredNorm();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - target) <= 4.0 * se);
  CHECK_THROWS_AS(sample_gue_dense_eigs(65, rng), std::invalid_argument);
}

TEST_CASE("uniform Schatten-2 ball: containment and radial law") {
  RandomStream rng(20, 0);
  const int draws = 100000;
  long long inside = 0;
  for (int i = 0; i < draws; ++i) {
    const EigSample s = sample_uniform_schatten2_ball(2, 4, rng);
    CHECK(s.values.norm() <= 1.0 + 1e-12);
    CHECK(s.density == EigDensity::uniform_schatten2);
    if (s.values.norm() <= 0.95) ++inside;
  }
  const double target = std::pow(0.95, 16);  // r^{d_n}, d = 16
  const double se = std::sqrt(target * (1.0 - target) / draws);
  CHECK(std::abs(inside / static_cast<double>(draws) - target) <= 3.0 * se);
}

TEST_CASE("uniform Schatten-2 ball: scaled sup-norm concentrates near 2") {
  RandomStream rng(21, 0);
  const int n = 100, draws = 2000;
  std::vector<double> stats(draws);
  for (int i = 0; i < draws; ++i) {
    const EigSample s = sample_uniform_schatten2_ball(2, n, rng);
    stats[i] = std::sqrt(static_cast<double>(n)) * s.values.cwiseAbs().maxCoeff();
  }
  std::sort(stats.begin(), stats.end());
  const double median = stats[draws / 2];
  CHECK(median >= 1.7);
  CHECK(median <= 2.1);
}

TEST_CASE("samples are sorted and reproducible") {
  RandomStream a(22, 5), b(22, 5), c(22, 6);
  const EigSample s1 = sample_beta_hermite_eigs(4, 20, a);
  const EigSample s2 = sample_beta_hermite_eigs(4, 20, b);
  const EigSample s3 = sample_beta_hermite_eigs(4, 20, c);
  CHECK(s1.values == s2.values);  // bit-exact
  CHECK(s1.values != s3.values);
  for (int i = 1; i < 20; ++i) CHECK(s1.values[i] >= s1.values[i - 1]);
  CHECK_THROWS_AS(sample_beta_hermite_eigs(3, 5, a), std::invalid_argument);
}

TEST_CASE("random-coordinate pick is symmetric about zero") {
  // exchangeability surrogate: sign test on a randomly chosen coordinate
  RandomStream rng(23, 0);
  const int draws = 100000;
  long long positive = 0, nonzero = 0;
  for (int i = 0; i < draws; ++i) {
    const EigSample s = sample_beta_hermite_eigs(1, 4, rng);
    const auto idx = static_cast<int>(rng.next_double() * 4.0);
    const double x = s.values[std::min(idx, 3)];
    if (x != 0.0) {
      ++nonzero;
      if (x > 0.0) ++positive;
    }
  }
  const double z = (positive - 0.5 * nonzero) / std::sqrt(0.25 * nonzero);
  const double p_value = 2.0 * phi(-std::abs(z));
  CHECK(p_value > 0.001);
}

TEST_CASE("eigenvalue scale validation: log E||X||^2 is linear in log d_n") {
  // Fitted slope over n in {4, 8, 16, 32} must be 1 within 2%; a wrong
  // global eigenvalue rescaling would bend or shift this line.
  for (int beta : {1, 2, 4}) {
    std::vector<double> xs, ys;
    for (int n : {4, 8, 16, 32}) {
      RandomStream rng(24, static_cast<std::uint64_t>(beta) * 100 + n);
      const int draws = 20000;
      double sum = 0.0;
      for (int i = 0; i < draws; ++i)
        sum += sample_beta_hermite_eigs(beta, n, rng).values.squaredNorm();
      xs.push_back(std::log(static_cast<double>(schatten_dimension(beta, n))));
      ys.push_back(std::log(sum / draws));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    CHECK(num / den == doctest::Approx(1.0).epsilon(0.02));
  }
}
