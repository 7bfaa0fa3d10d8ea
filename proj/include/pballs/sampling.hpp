#pragma once

#include <Eigen/Dense>
#include <string>

#include "pballs/norm_order.hpp"
#include "pballs/rng.hpp"

namespace pballs {

enum class EigDensity { gaussian_beta, uniform_schatten2 };

std::string to_string(EigDensity d);

/// Sorted eigenvalue vector drawn either from the Gaussian beta-ensemble
/// density e^{-sum x^2} prod |x_i - x_j|^beta or from a uniform point of
/// the Schatten-2 ball.
struct EigSample {
  Eigen::VectorXd values;  // ascending
  int beta = 2;
  int n = 0;
  EigDensity density = EigDensity::gaussian_beta;
};

struct LpSample {
  Eigen::VectorXd coordinates;
  NormOrder p;
};

/// l_p norm of a coordinate vector (max-abs on the inf branch).
double lp_norm(const Eigen::VectorXd& v, NormOrder p);

/// One draw with density proportional to e^{-|x|^p}, p >= 1 finite.
double sample_generalized_gaussian(double p, RandomStream& rng);

/// Uniform point of B_p^n: U^{1/n} Y / ||Y||_p with Y i.i.d. generalized
/// Gaussian; i.i.d. uniform coordinates on [-1, 1] for p = inf.
LpSample sample_uniform_lp_ball(NormOrder p, int n, RandomStream& rng);

/// All eigenvalues of a symmetric tridiagonal matrix, ascending, each to
/// relative accuracy ~1e-10 of the matrix norm.
Eigen::VectorXd symmetric_tridiagonal_eigenvalues(const Eigen::VectorXd& diagonal,
                                                  const Eigen::VectorXd& subdiagonal);

/// Sorted eigenvalues with joint density proportional to
/// e^{-sum x^2} prod |x_i - x_j|^beta, via the tridiagonal beta-ensemble
/// model: diag ~ Normal(0, 2), subdiag_k ~ Chi(beta (n - k)), entries
/// divided by sqrt(2), eigenvalues rescaled by kHermiteEigScale.
EigSample sample_beta_hermite_eigs(int beta, int n, RandomStream& rng);

/// Global eigenvalue rescaling mapping the tridiagonal model's
/// e^{-sum x^2/2} weight onto the target e^{-sum x^2}. Validated against
/// the exact moment E ||X||_2^2 = d_n / 2 by the moment-oracle tests.
inline constexpr double kHermiteEigScale = 0.70710678118654752440;  // 1/sqrt(2)

/// Dense-matrix oracle sampler for beta = 2: eigenvalues of a self-adjoint
/// complex matrix with density proportional to e^{-Tr A^2}, i.e. diagonal
/// entries Normal(0, 1/2) and off-diagonal real/imaginary parts
/// Normal(0, 1/4). Oracle scale only: n <= 64.
EigSample sample_gue_dense_eigs(int n, RandomStream& rng);

/// Eigenvalue vector of a uniform random point of the Schatten-2 ball:
/// U^{1/d_n} X / ||X||_2 with X a beta-ensemble draw.
EigSample sample_uniform_schatten2_ball(int beta, int n, RandomStream& rng);

}  // namespace pballs
