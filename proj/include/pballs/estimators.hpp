#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pballs/balls.hpp"
#include "pballs/rng.hpp"
#include "pballs/sampling.hpp"

namespace pballs {

/// Bernoulli-proportion Monte Carlo estimate. The interval is Wilson at
/// ci_level; the standard error is the plain binomial one.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long count = 0;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> sample);

  /// Right-continuous empirical CDF value at x.
  double operator()(double x) const;

  const std::vector<double>& sorted() const { return sorted_; }
  long long count() const { return static_cast<long long>(sorted_.size()); }

 private:
  std::vector<double> sorted_;
};

struct ExtremalPair {
  double xmin;
  double xmax;
};

struct IndependenceReport {
  int beta = 2;
  int n = 0;
  std::vector<std::pair<double, double>> grid;
  std::vector<double> joint;
  std::vector<double> product;
  double max_abs_gap = 0.0;
  double gap_std_error = 0.0;
};

struct MomentSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  long long count = 0;
};

using BallSpec = std::variant<LpBallSpec, SchattenBallSpec>;

/// Samples are drawn in fixed-size chunks; chunk k always uses the sibling
/// stream base.stream_index() + 1 + k, so results are independent of the
/// worker-thread count. Reductions combine integer success counts (or
/// per-chunk partial sums in chunk order) only.
inline constexpr long long kChunkSamples = 4096;

namespace detail {
/// Runs fn(chunk) for chunk = 0..n_chunks-1 on `threads` workers.
void run_chunks(long long n_chunks, int threads,
                const std::function<void(long long)>& fn);
}  // namespace detail

/// Intersection volume vol(D_X cap t D_Y) as the probability that a
/// uniform point of B_X has Y-norm below t times the exact volume-radius
/// ratio. Supported pairs: any (l_p, l_q); (Schatten-2, Schatten-{2,inf}).
/// With log_dilate the dilation becomes t (log n)^{1/p} (l_p vs l_inf only).
MCEstimate intersection_volume_mc(const BallSpec& X, const BallSpec& Y, double t,
                                  long long N, RandomStream base, int threads = 1,
                                  bool log_dilate = false);

/// Same estimator over a dilation grid with common random numbers: one
/// sample set, threshold comparisons only, hence exactly monotone in t.
std::vector<MCEstimate> intersection_volume_grid(const BallSpec& X, const BallSpec& Y,
                                                 const std::vector<double>& t_grid,
                                                 long long N, RandomStream base,
                                                 int threads = 1,
                                                 bool log_dilate = false);

struct ScanCell {
  int n;
  double t;
  double dilation;  // effective dilation (t (log n)^{1/p} for l_p vs l_inf)
  MCEstimate estimate;
};

/// Experiment driver for the intersection trichotomies. Exactly one of
/// `lp` (l_p vs l_inf with the (log n)^{1/p} dilation) or `schatten_beta`
/// (Schatten-2 vs Schatten-inf) must be given.
std::vector<ScanCell> critical_scan(std::optional<NormOrder> lp,
                                    std::optional<int> schatten_beta,
                                    const std::vector<int>& n_list,
                                    const std::vector<double>& t_grid, long long N,
                                    RandomStream base, int threads = 1);

/// Bisection on t for estimate = 1/2, on one common sample set. The l_p
/// vs l_inf pair applies the (log n)^{1/p} dilation so the result is
/// comparable with threshold_lp_inf.
double empirical_threshold(const BallSpec& X, const BallSpec& Y, long long N,
                           RandomStream base, int threads = 1);

/// Centred/rescaled extreme eigenvalues sqrt(2) n^{1/6}(min + sqrt(2n)) and
/// sqrt(2) n^{1/6}(max - sqrt(2n)) of a beta-ensemble sample.
ExtremalPair extremal_scalings(const EigSample& sample);

/// sqrt(2) n^{2/3} (sqrt(n) max|values| - 2) for a uniform Schatten-2 ball
/// sample with beta = 2.
double max_abs_scaling(const EigSample& sample, int n);

struct GumbelCheck {
  EmpiricalCDF cdf;
  double ks = 0.0;
};

/// Empirical CDF of the rescaled sup-norm statistic of uniform l_p-ball
/// points, plus its KS distance to the Gumbel law exp(-e^{-t}).
GumbelCheck gumbel_check(double p, int n, long long N, RandomStream base,
                         int threads = 1);

/// Joint vs product CDFs of the rescaled extreme eigenvalues over a grid,
/// with a bootstrap (200 resamples) standard error of the maximal gap.
IndependenceReport independence_probe(int beta, int n, long long N,
                                      const std::vector<std::pair<double, double>>& grid,
                                      RandomStream base, int threads = 1);

/// Mean/stderr (and empirical variance) of the linear-statistic CLT
/// quantity n ((1/n sum |(beta n)^{-1/2} X_i|^2)^{1/2} - 1/2).
MomentSummary norm_clt_check(int beta, int n, long long N, RandomStream base,
                             int threads = 1);

/// sup_x |F_emp(x) - F_ref(x)| using both one-sided evaluations at jumps.
double ks_distance(const EmpiricalCDF& emp,
                   const std::function<double(double)>& reference);

/// Two-sample KS distance between empirical CDFs.
double ks_distance_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b);

}  // namespace pballs
