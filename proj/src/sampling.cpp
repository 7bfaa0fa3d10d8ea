#include "pballs/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "pballs/balls.hpp"

namespace pballs {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void validate_matrix_size(int n) {
  if (n < 1) throw std::invalid_argument("sampler: n must be >= 1");
}

}  // namespace

std::string to_string(EigDensity d) {
  switch (d) {
    case EigDensity::gaussian_beta: return "gaussian-beta";
    case EigDensity::uniform_schatten2: return "uniform-schatten2-ball";
  }
  return "unknown";
}

double lp_norm(const Eigen::VectorXd& v, NormOrder p) {
  if (v.size() == 0) return 0.0;
  if (p.is_inf()) return v.cwiseAbs().maxCoeff();
  const double pv = p.value();
  if (pv == 1.0) return v.cwiseAbs().sum();
  if (pv == 2.0) return v.norm();
  return std::pow(v.cwiseAbs().array().pow(pv).sum(), 1.0 / pv);
}

double sample_generalized_gaussian(double p, RandomStream& rng) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("sample_generalized_gaussian: finite p >= 1");
  const double w = rng.next_gamma(1.0 / p, 1.0);
  const double magnitude = std::pow(w, 1.0 / p);
  return rng.next_double() < 0.5 ? -magnitude : magnitude;
}

LpSample sample_uniform_lp_ball(NormOrder p, int n, RandomStream& rng) {
  validate_matrix_size(n);
  Eigen::VectorXd z(n);
  if (p.is_inf()) {
    for (int i = 0; i < n; ++i) z[i] = 2.0 * rng.next_double() - 1.0;
    return {std::move(z), p};
  }
  const double pv = p.value();
  for (int i = 0; i < n; ++i) z[i] = sample_generalized_gaussian(pv, rng);
  const double norm = lp_norm(z, p);
  const double radius = std::pow(rng.next_double(), 1.0 / n);
  z *= radius / norm;
  return {std::move(z), p};
}

Eigen::VectorXd symmetric_tridiagonal_eigenvalues(const Eigen::VectorXd& diagonal,
                                                  const Eigen::VectorXd& subdiagonal) {
  const auto n = diagonal.size();
  if (n < 1) throw std::invalid_argument("tridiagonal eigensolver: empty diagonal");
  if (subdiagonal.size() != n - 1)
    throw std::invalid_argument("tridiagonal eigensolver: subdiagonal must have n-1 entries");
  if (n == 1) return diagonal;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, subdiagonal, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal eigensolver did not converge");
  return solver.eigenvalues();
}

EigSample sample_beta_hermite_eigs(int beta, int n, RandomStream& rng) {
  validate_beta(beta);
  validate_matrix_size(n);
  // Normal(0, 2) diagonal and Chi(beta (n - k)) subdiagonal, all divided
  // by sqrt(2); the diagonal quotient is a standard normal. Draw order:
  // full diagonal first, then the subdiagonal.
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = rng.next_normal();
  for (int k = 1; k <= n - 1; ++k)
    sub[k - 1] = rng.next_chi(static_cast<double>(beta) * (n - k)) / kSqrt2;

  Eigen::VectorXd eigs;
  try {
    eigs = symmetric_tridiagonal_eigenvalues(diag, sub);
  } catch (const std::runtime_error&) {
    // One retry with perturbed shifts before giving up.
    Eigen::VectorXd nudged = sub * (1.0 + 1e-13);
    try {
      eigs = symmetric_tridiagonal_eigenvalues(diag, nudged);
    } catch (const std::runtime_error&) {
      throw std::runtime_error("beta-ensemble eigensolve failed twice (" +
                               rng.describe() + ")");
    }
  }
  return {eigs * kHermiteEigScale, beta, n, EigDensity::gaussian_beta};
}

EigSample sample_gue_dense_eigs(int n, RandomStream& rng) {
  validate_matrix_size(n);
  if (n > 64)
    throw std::invalid_argument("sample_gue_dense_eigs: oracle sampler capped at n <= 64");
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = rng.next_normal() / kSqrt2;  // Normal(0, 1/2)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double re = 0.5 * rng.next_normal();  // Normal(0, 1/4)
      const double im = 0.5 * rng.next_normal();
      a(i, j) = std::complex<double>(re, im);
      a(j, i) = std::conj(a(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense GUE eigensolve failed (" + rng.describe() + ")");
  return {solver.eigenvalues(), 2, n, EigDensity::gaussian_beta};
}

EigSample sample_uniform_schatten2_ball(int beta, int n, RandomStream& rng) {
  const double d = static_cast<double>(schatten_dimension(beta, n));
  for (;;) {
    EigSample x = sample_beta_hermite_eigs(beta, n, rng);
    const double norm = x.values.norm();
    if (norm == 0.0) continue;  // measure-zero degenerate draw
    const double radius = std::pow(rng.next_double(), 1.0 / d);
    x.values *= radius / norm;
    x.density = EigDensity::uniform_schatten2;
    return x;
  }
}

}  // namespace pballs
