#include "pballs/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace pballs {

namespace {

constexpr double kZ95 = 1.959963984540054;  // Phi^{-1}(0.975)

long long chunk_count(long long n) { return (n + kChunkSamples - 1) / kChunkSamples; }

long long chunk_size(long long n, long long chunk) {
  return std::min(kChunkSamples, n - chunk * kChunkSamples);
}

MCEstimate make_estimate(long long successes, long long n, std::uint64_t seed) {
  MCEstimate e;
  e.count = n;
  e.seed = seed;
  e.value = static_cast<double>(successes) / static_cast<double>(n);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (e.value + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(e.value * (1.0 - e.value) / n + z2 / (4.0 * n * n)) / denom;
  e.ci_low = std::max(0.0, centre - half);
  e.ci_high = std::min(1.0, centre + half);
  return e;
}

// A sampled ball pair reduced to the ambient dimension, the exact
// log-volume-radius ratio log(vol_X^{1/dim} / vol_Y^{1/dim}) and the
// Y-norm statistic of a uniform B_X point.
struct PairModel {
  long long dim = 0;
  double log_radius_ratio = 0.0;
  bool log_dilate = false;  // apply the (log n)^{1/p} factor to t
  double dilate_exponent = 0.0;
  std::function<double(RandomStream&)> statistic;

  double dilation(double t, long long n) const {
    if (!log_dilate) return t;
    return t * std::pow(std::log(static_cast<double>(n)), dilate_exponent);
  }
};

PairModel build_pair_model(const BallSpec& X, const BallSpec& Y, bool log_dilate) {
  PairModel model;
  if (std::holds_alternative<LpBallSpec>(X) && std::holds_alternative<LpBallSpec>(Y)) {
    const auto& bx = std::get<LpBallSpec>(X);
    const auto& by = std::get<LpBallSpec>(Y);
    if (bx.n != by.n)
      throw std::invalid_argument("intersection estimator: ambient dimensions differ");
    model.dim = bx.n;
    model.log_radius_ratio =
        (log_volume_lp(bx.p, bx.n).value - log_volume_lp(by.p, by.n).value) / bx.n;
    if (log_dilate) {
      if (!by.p.is_inf())
        throw std::invalid_argument(
            "intersection estimator: log dilation applies to l_p vs l_inf only");
      model.log_dilate = true;
      model.dilate_exponent = bx.p.reciprocal();
    }
    const NormOrder px = bx.p, py = by.p;
    const int n = bx.n;
    model.statistic = [px, py, n](RandomStream& rng) {
      return lp_norm(sample_uniform_lp_ball(px, n, rng).coordinates, py);
    };
    return model;
  }
  if (std::holds_alternative<SchattenBallSpec>(X) &&
      std::holds_alternative<SchattenBallSpec>(Y)) {
    if (log_dilate)
      throw std::invalid_argument(
          "intersection estimator: log dilation applies to l_p vs l_inf only");
    const auto& bx = std::get<SchattenBallSpec>(X);
    const auto& by = std::get<SchattenBallSpec>(Y);
    if (bx.n != by.n || bx.beta != by.beta)
      throw std::invalid_argument("intersection estimator: Schatten specs must share (beta, n)");
    if (!(NormOrder(2.0) == bx.p))
      throw std::invalid_argument(
          "intersection estimator: only the Schatten-2 ball can be sampled");
    const long long d = schatten_dimension(bx.beta, bx.n);
    model.dim = d;
    auto log_volume = [](const SchattenBallSpec& s) {
      if (s.p.is_inf()) return log_volume_schatten_inf(s.beta, s.n).value;
      if (NormOrder(2.0) == s.p) return log_volume_schatten2(s.beta, s.n).value;
      throw std::invalid_argument(
          "intersection estimator: exact Schatten volumes exist only for p in {2, inf}");
    };
    model.log_radius_ratio = (log_volume(bx) - log_volume(by)) / static_cast<double>(d);
    const NormOrder py = by.p;
    const int beta = bx.beta, n = bx.n;
    model.statistic = [py, beta, n](RandomStream& rng) {
      return lp_norm(sample_uniform_schatten2_ball(beta, n, rng).values, py);
    };
    return model;
  }
  throw std::invalid_argument(
      "intersection estimator: a classical ball cannot be paired with a Schatten ball");
}

// Ambient n used by the dilation's log factor.
long long pair_ambient_n(const BallSpec& X) {
  if (std::holds_alternative<LpBallSpec>(X)) return std::get<LpBallSpec>(X).n;
  return std::get<SchattenBallSpec>(X).n;
}

// Counts of {statistic <= dilation(t) * radius_ratio} per grid entry, on
// one common sample set.
std::vector<long long> count_successes(const PairModel& model, long long ambient_n,
                                       const std::vector<double>& t_grid, long long N,
                                       RandomStream base, int threads) {
  if (N < 1) throw std::invalid_argument("estimator: sample count must be >= 1");
  std::vector<double> thresholds(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    thresholds[i] = model.dilation(t_grid[i], ambient_n) *
                    std::exp(model.log_radius_ratio);

  const long long chunks = chunk_count(N);
  std::vector<std::vector<long long>> per_chunk(
      chunks, std::vector<long long>(t_grid.size(), 0));
  detail::run_chunks(chunks, threads, [&](long long c) {
    RandomStream rng = base.sibling(base.stream_index() + 1 + static_cast<std::uint64_t>(c));
    const long long m = chunk_size(N, c);
    auto& counts = per_chunk[c];
    for (long long i = 0; i < m; ++i) {
      const double stat = model.statistic(rng);
      for (std::size_t j = 0; j < thresholds.size(); ++j)
        if (stat <= thresholds[j]) ++counts[j];
    }
  });

  std::vector<long long> total(t_grid.size(), 0);
  for (long long c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j < t_grid.size(); ++j) total[j] += per_chunk[c][j];
  return total;
}

// Per-sample scalar statistics filled at absolute sample positions, so the
// resulting vector does not depend on scheduling.
std::vector<double> collect_statistics(const std::function<double(RandomStream&)>& stat,
                                       long long N, RandomStream base, int threads) {
  std::vector<double> out(static_cast<std::size_t>(N));
  const long long chunks = chunk_count(N);
  detail::run_chunks(chunks, threads, [&](long long c) {
    RandomStream rng = base.sibling(base.stream_index() + 1 + static_cast<std::uint64_t>(c));
    const long long m = chunk_size(N, c);
    for (long long i = 0; i < m; ++i)
      out[static_cast<std::size_t>(c * kChunkSamples + i)] = stat(rng);
  });
  return out;
}

}  // namespace

namespace detail {

void run_chunks(long long n_chunks, int threads,
                const std::function<void(long long)>& fn) {
  if (threads < 1) throw std::invalid_argument("run_chunks: threads must be >= 1");
  if (threads == 1 || n_chunks == 1) {
    for (long long c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<long long>(threads, n_chunks));
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long long c = next.fetch_add(1);
        if (c >= n_chunks) return;
        try {
          fn(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

EmpiricalCDF::EmpiricalCDF(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCDF: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

MCEstimate intersection_volume_mc(const BallSpec& X, const BallSpec& Y, double t,
                                  long long N, RandomStream base, int threads,
                                  bool log_dilate) {
  return intersection_volume_grid(X, Y, {t}, N, base, threads, log_dilate).front();
}

std::vector<MCEstimate> intersection_volume_grid(const BallSpec& X, const BallSpec& Y,
                                                 const std::vector<double>& t_grid,
                                                 long long N, RandomStream base,
                                                 int threads, bool log_dilate) {
  if (t_grid.empty()) throw std::invalid_argument("estimator: empty dilation grid");
  for (double t : t_grid)
    if (!(t > 0.0)) throw std::invalid_argument("estimator: dilations must be positive");
  const PairModel model = build_pair_model(X, Y, log_dilate);
  const auto counts = count_successes(model, pair_ambient_n(X), t_grid, N, base, threads);
  std::vector<MCEstimate> out;
  out.reserve(counts.size());
  for (long long k : counts) out.push_back(make_estimate(k, N, base.seed()));
  return out;
}

std::vector<ScanCell> critical_scan(std::optional<NormOrder> lp,
                                    std::optional<int> schatten_beta,
                                    const std::vector<int>& n_list,
                                    const std::vector<double>& t_grid, long long N,
                                    RandomStream base, int threads) {
  if (lp.has_value() == schatten_beta.has_value())
    throw std::invalid_argument("critical_scan: give exactly one of l_p order or beta");
  if (n_list.empty() || t_grid.empty())
    throw std::invalid_argument("critical_scan: empty grids");

  std::vector<ScanCell> table;
  table.reserve(n_list.size() * t_grid.size());
  std::uint64_t stream_block = base.stream_index();
  for (int n : n_list) {
    const bool dilate = lp.has_value();
    const BallSpec X = lp ? BallSpec(LpBallSpec{*lp, n})
                          : BallSpec(SchattenBallSpec{NormOrder(2.0), *schatten_beta, n});
    const BallSpec Y =
        lp ? BallSpec(LpBallSpec{NormOrder::infinity(), n})
           : BallSpec(SchattenBallSpec{NormOrder::infinity(), *schatten_beta, n});
    const PairModel model = build_pair_model(X, Y, dilate);
    RandomStream row_base = base.sibling(stream_block);
    const auto counts = count_successes(model, n, t_grid, N, row_base, threads);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      table.push_back(ScanCell{n, t_grid[j], model.dilation(t_grid[j], n),
                               make_estimate(counts[j], N, base.seed())});
    }
    stream_block += static_cast<std::uint64_t>(chunk_count(N)) + 2;
  }
  return table;
}

double empirical_threshold(const BallSpec& X, const BallSpec& Y, long long N,
                           RandomStream base, int threads) {
  // The l_p vs l_inf pair bisects with the (log n)^{1/p} dilation applied
  // inside, so the result converges to the threshold_lp_inf constant.
  const bool dilate = std::holds_alternative<LpBallSpec>(Y) &&
                      std::get_if<LpBallSpec>(&Y)->p.is_inf() &&
                      std::holds_alternative<LpBallSpec>(X);
  const PairModel model = build_pair_model(X, Y, dilate);
  const long long ambient = pair_ambient_n(X);
  const auto stats = collect_statistics(model.statistic, N, base, threads);
  const double ratio = std::exp(model.log_radius_ratio);

  auto estimate_at = [&](double t) {
    const double threshold = model.dilation(t, ambient) * ratio;
    long long k = 0;
    for (double s : stats)
      if (s <= threshold) ++k;
    return static_cast<double>(k) / static_cast<double>(N);
  };

  double lo = 1e-3, hi = 1e3;
  if (!(estimate_at(lo) < 0.5 && estimate_at(hi) > 0.5))
    throw std::runtime_error(
        "empirical_threshold: no bracket for estimate = 1/2 in [1e-3, 1e3]");
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (estimate_at(mid) < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ExtremalPair extremal_scalings(const EigSample& sample) {
  if (sample.density != EigDensity::gaussian_beta)
    throw std::invalid_argument(
        "extremal_scalings: requires a Gaussian beta-ensemble sample, got " +
        to_string(sample.density));
  // The sqrt(2n)-centered edge scaling belongs to the classical
  // GOE/GUE/GSE normalization (weight e^{-beta sum x^2 / 2}), whose
  // spectral edge is sqrt(2n) for every beta. Our sample density
  // e^{-sum x^2} prod|.|^beta has edge sqrt(beta n), so map onto the
  // classical scale first; the factor is 1 at beta = 2.
  const double to_classical = std::sqrt(2.0 / sample.beta);
  const double n = sample.n;
  const double scale = std::sqrt(2.0) * std::pow(n, 1.0 / 6.0);
  const double edge = std::sqrt(2.0 * n);
  return {scale * (to_classical * sample.values[0] + edge),
          scale * (to_classical * sample.values[sample.values.size() - 1] - edge)};
}

double max_abs_scaling(const EigSample& sample, int n) {
  if (sample.density != EigDensity::uniform_schatten2 || sample.beta != 2)
    throw std::invalid_argument(
        "max_abs_scaling: requires a uniform Schatten-2 ball sample with beta = 2");
  if (sample.n != n)
    throw std::invalid_argument("max_abs_scaling: sample size does not match n");
  const double m = sample.values.cwiseAbs().maxCoeff();
  return std::sqrt(2.0) * std::pow(static_cast<double>(n), 2.0 / 3.0) *
         (std::sqrt(static_cast<double>(n)) * m - 2.0);
}

GumbelCheck gumbel_check(double p, int n, long long N, RandomStream base, int threads) {
  const GumbelConstants gc = gumbel_constants(p, n);
  const NormOrder order(p);
  auto stat = [gc, order, n](RandomStream& rng) {
    const LpSample z = sample_uniform_lp_ball(order, n, rng);
    return gc.scale * lp_norm(z.coordinates, NormOrder::infinity()) - gc.centering;
  };
  EmpiricalCDF cdf(collect_statistics(stat, N, base, threads));
  const double ks =
      ks_distance(cdf, [](double t) { return std::exp(-std::exp(-t)); });
  return {std::move(cdf), ks};
}

IndependenceReport independence_probe(int beta, int n, long long N,
                                      const std::vector<std::pair<double, double>>& grid,
                                      RandomStream base, int threads) {
  validate_beta(beta);
  if (grid.empty()) throw std::invalid_argument("independence_probe: empty grid");
  for (const auto& [x, y] : grid)
    if (x < -5.0 || x > 3.0 || y < -5.0 || y > 3.0)
      throw std::invalid_argument(
          "independence_probe: grid points must lie in [-5, 3]^2");

  std::vector<ExtremalPair> pairs(static_cast<std::size_t>(N));
  const long long chunks = chunk_count(N);
  detail::run_chunks(chunks, threads, [&](long long c) {
    RandomStream rng = base.sibling(base.stream_index() + 1 + static_cast<std::uint64_t>(c));
    const long long m = chunk_size(N, c);
    for (long long i = 0; i < m; ++i) {
      pairs[static_cast<std::size_t>(c * kChunkSamples + i)] =
          extremal_scalings(sample_beta_hermite_eigs(beta, n, rng));
    }
  });

  auto gaps_for = [&](const std::vector<ExtremalPair>& sample, IndependenceReport* full) {
    double max_gap = 0.0;
    const double count = static_cast<double>(sample.size());
    for (const auto& [x, y] : grid) {
      long long joint = 0, margin_min = 0, margin_max = 0;
      for (const auto& pr : sample) {
        const bool a = pr.xmin <= x, b = pr.xmax <= y;
        joint += a && b;
        margin_min += a;
        margin_max += b;
      }
      const double pj = joint / count;
      const double pp = (margin_min / count) * (margin_max / count);
      max_gap = std::max(max_gap, std::abs(pj - pp));
      if (full) {
        full->joint.push_back(pj);
        full->product.push_back(pp);
      }
    }
    return max_gap;
  };

  IndependenceReport report;
  report.beta = beta;
  report.n = n;
  report.grid = grid;
  report.max_abs_gap = gaps_for(pairs, &report);

  // Bootstrap stderr of the max-gap statistic (200 resamples).
  constexpr int kResamples = 200;
  RandomStream boot = base.sibling(base.stream_index() + 1 +
                                   static_cast<std::uint64_t>(chunks));
  std::vector<ExtremalPair> resample(pairs.size());
  double sum = 0.0, sumsq = 0.0;
  for (int b = 0; b < kResamples; ++b) {
    for (auto& slot : resample) {
      const auto idx = static_cast<std::size_t>(boot.next_double() * pairs.size());
      slot = pairs[std::min(idx, pairs.size() - 1)];
    }
    const double g = gaps_for(resample, nullptr);
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / kResamples;
  report.gap_std_error =
      std::sqrt(std::max(0.0, (sumsq / kResamples - mean * mean) * kResamples /
                                  (kResamples - 1.0)));
  return report;
}

MomentSummary norm_clt_check(int beta, int n, long long N, RandomStream base,
                             int threads) {
  validate_beta(beta);
  if (n < 10) throw std::invalid_argument("norm_clt_check: n must be >= 10");
  const double bn2 = static_cast<double>(beta) * n * static_cast<double>(n);
  auto stat = [beta, n, bn2](RandomStream& rng) {
    const EigSample s = sample_beta_hermite_eigs(beta, n, rng);
    const double mean_sq = s.values.squaredNorm() / bn2;
    return n * (std::sqrt(mean_sq) - 0.5);
  };
  const auto stats = collect_statistics(stat, N, base, threads);
  double sum = 0.0;
  for (double v : stats) sum += v;
  const double mean = sum / static_cast<double>(N);
  double ss = 0.0;
  for (double v : stats) ss += (v - mean) * (v - mean);
  const double variance = N > 1 ? ss / static_cast<double>(N - 1) : 0.0;
  return {mean, std::sqrt(variance / static_cast<double>(N)), variance, N};
}

double ks_distance(const EmpiricalCDF& emp,
                   const std::function<double(double)>& reference) {
  const auto& xs = emp.sorted();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  double prev_ref = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = reference(xs[i]);
    if (r < prev_ref - 1e-12)
      throw std::invalid_argument("ks_distance: reference CDF must be nondecreasing");
    prev_ref = r;
    d = std::max(d, std::abs((i + 1.0) / n - r));
    d = std::max(d, std::abs(static_cast<double>(i) / n - r));
  }
  return d;
}

double ks_distance_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  const auto& xa = a.sorted();
  const auto& xb = b.sorted();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    // advance both sweeps past the smaller value (and all its ties)
    const double v = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == v) ++i;
    while (j < xb.size() && xb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / xa.size() -
                             static_cast<double>(j) / xb.size()));
  }
  return d;
}

}  // namespace pballs
