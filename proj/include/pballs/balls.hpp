#pragma once

#include <cstdint>
#include <string>

#include "pballs/norm_order.hpp"

namespace pballs {

enum class VolumeFormula { lp_exact, schatten2_exact, schatten_inf_exact, asymptotic };

std::string to_string(VolumeFormula f);

/// Natural-log volume together with the formula that produced it; callers
/// must not mix asymptotic-tagged values into exact ratio computations.
struct LogVolume {
  double value;
  VolumeFormula formula;
};

struct LpBallSpec {
  NormOrder p;
  int n;
};

struct SchattenBallSpec {
  NormOrder p;  // {2, inf} for volume work; any p >= 1 for thresholds
  int beta;     // {1, 2, 4}
  int n;        // matrix size
};

void validate_beta(int beta);

/// Real dimension of the self-adjoint n x n matrix space: beta n(n-1)/2 + n.
long long schatten_dimension(int beta, long long n);

/// Exact ln vol(B_p^n) = n ln 2 + n ln Gamma(1 + 1/p) - ln Gamma(1 + n/p);
/// the p = inf branch is n ln 2 exactly.
LogVolume log_volume_lp(NormOrder p, long long n);

/// c_p = 2 e^{1/p} p^{1/p} Gamma(1 + 1/p), the limit of n^{1/p} vol^{1/n}.
double c_p_limit(double p);

/// Finite-n defect e_n with n^{1/p} vol(B_p^n)^{1/n} = c_p (1 + e_n).
/// Finite p only; e_n vanishes identically on the inf branch.
double e_n_lp(double p, long long n);

/// Exact ln vol of the Schatten-2 ball: the Euclidean d_n-ball volume.
LogVolume log_volume_schatten2(int beta, long long n);

/// ln c_{n,beta}, the eigenvalue-coordinates Jacobian normalization,
/// accumulated term by term in log space.
double log_c_n_beta(int beta, long long n);

/// Exact ln vol of the Schatten-inf ball (Selberg-integral closed form).
LogVolume log_volume_schatten_inf(int beta, long long n);

/// Shape factor Delta(p) of the asymptotic volume radius; Delta(inf) = 1/2.
double delta_factor(NormOrder p);

/// Asymptotic volume radius n^{-(1/p+1/2)} Delta(p) (4 pi / beta)^{1/2} e^{3/4}.
double volume_radius_schatten_asymptotic(NormOrder p, int beta, long long n);

/// r_n = (1/d_n) ln vol - (leading expansion terms); decays like
/// O(n^{-1} log n) for p in {2, inf}.
double log_volume_expansion_residual(NormOrder p, int beta, long long n);

struct RadiusRatio {
  double t_n;  // sqrt(n) vol(B_2)^{1/d} / vol(B_inf)^{1/d}
  double e_n;  // T_n Delta(inf)/Delta(2) - 1
};

RadiusRatio ratio_schatten_radii(int beta, long long n);

/// Critical dilation for l_p vs l_inf: e^{-1/p} / Gamma(1 + 1/p); equals 1
/// on the inf branch by the 1/inf = 0 convention.
double threshold_lp_inf(NormOrder p);

struct SchattenThreshold {
  double value;
  /// The q = inf limit value e^{1/(2p)} is proven only for (p, beta) = (2, 2).
  bool conjectured;
};

/// t_{p,q,beta} = e^{(1/2)(1/p - 1/q)} (2p/(p+q))^{1/q}; the value does not
/// depend on beta, which is validated and recorded only.
SchattenThreshold threshold_schatten(double p, NormOrder q, int beta);

struct GumbelConstants {
  double centering;  // A_n^{(p)}
  double scale;      // n^{1/p} / (p log n)^{1/p - 1}
  double k_p;        // 1 / (p^{1/p} Gamma(1 + 1/p))
};

/// Centering/scaling of the sup-norm of a uniform l_p-ball point; requires
/// p log n > 1.
GumbelConstants gumbel_constants(double p, long long n);

/// Exact finite-n offset R_n^{(p)} at dilation t (with the (log n)^{1/p}
/// dilation convention); the critical-case prediction is exp(-exp(-R)).
double critical_offset(double p, long long n, double t);

}  // namespace pballs
