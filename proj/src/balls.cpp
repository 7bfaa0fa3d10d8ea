#include "pballs/balls.hpp"

#include <cmath>
#include <stdexcept>

#include "pballs/specfun.hpp"

namespace pballs {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

void validate_n(long long n) {
  if (n < 1) throw std::invalid_argument("ball spec: n must be >= 1");
}

}  // namespace

std::string to_string(VolumeFormula f) {
  switch (f) {
    case VolumeFormula::lp_exact: return "lp-exact";
    case VolumeFormula::schatten2_exact: return "schatten-2-exact";
    case VolumeFormula::schatten_inf_exact: return "schatten-inf-exact";
    case VolumeFormula::asymptotic: return "asymptotic";
  }
  return "unknown";
}

void validate_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw std::invalid_argument("beta must be one of {1, 2, 4}, got " +
                                std::to_string(beta));
}

long long schatten_dimension(int beta, long long n) {
  validate_beta(beta);
  validate_n(n);
  return beta * (n * (n - 1) / 2) + n;
}

LogVolume log_volume_lp(NormOrder p, long long n) {
  validate_n(n);
  if (p.is_inf()) return {static_cast<double>(n) * kLn2, VolumeFormula::lp_exact};
  const double pv = p.value();
  const double v = n * kLn2 + n * log_gamma(1.0 + 1.0 / pv) -
                   log_gamma(1.0 + static_cast<double>(n) / pv);
  return {v, VolumeFormula::lp_exact};
}

double c_p_limit(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("c_p_limit: p must be >= 1");
  return 2.0 * std::exp(1.0 / p) * std::pow(p, 1.0 / p) *
         std::exp(log_gamma(1.0 + 1.0 / p));
}

double e_n_lp(double p, long long n) {
  if (!std::isfinite(p))
    throw std::invalid_argument("e_n_lp: finite p only; the inf branch is identically 0");
  if (!(p >= 1.0)) throw std::invalid_argument("e_n_lp: p must be >= 1");
  if (n < 2) throw std::invalid_argument("e_n_lp: n must be >= 2");
  const double radius = std::exp(log_volume_lp(NormOrder(p), n).value / n);
  return std::pow(static_cast<double>(n), 1.0 / p) * radius / c_p_limit(p) - 1.0;
}

LogVolume log_volume_schatten2(int beta, long long n) {
  const double d = static_cast<double>(schatten_dimension(beta, n));
  return {0.5 * d * std::log(kPi) - log_gamma(1.0 + 0.5 * d),
          VolumeFormula::schatten2_exact};
}

double log_c_n_beta(int beta, long long n) {
  validate_beta(beta);
  validate_n(n);
  const double b = beta;
  double s = -log_gamma(n + 1.0) -
             n * (kLn2 + 0.5 * b * std::log(kPi) - log_gamma(0.5 * b));
  for (long long k = 1; k <= n; ++k) {
    s += kLn2 + 0.5 * b * k * std::log(2.0 * kPi) - 0.5 * b * kLn2 -
         log_gamma(0.5 * b * k);
  }
  return s;
}

LogVolume log_volume_schatten_inf(int beta, long long n) {
  const double b = beta;
  const double d = static_cast<double>(schatten_dimension(beta, n));
  double s = log_c_n_beta(beta, n) + d * kLn2 + log_gamma(n + 1.0);
  for (long long j = 0; j < n; ++j) {
    s += 2.0 * log_gamma(1.0 + 0.5 * b * j) + log_gamma(0.5 * b * (j + 1)) -
         log_gamma(2.0 + 0.5 * b * (n + j - 1)) - log_gamma(0.5 * b);
  }
  return {s, VolumeFormula::schatten_inf_exact};
}

double delta_factor(NormOrder p) {
  if (p.is_inf()) return 0.5;
  const double pv = p.value();
  const double inner = std::log(pv) + 0.5 * std::log(kPi) + log_gamma(0.5 * pv) -
                       0.5 - log_gamma(0.5 * (pv + 1.0));
  return 0.5 * std::exp(inner / pv);
}

double volume_radius_schatten_asymptotic(NormOrder p, int beta, long long n) {
  validate_beta(beta);
  validate_n(n);
  const double expo = -(p.reciprocal() + 0.5);
  return std::pow(static_cast<double>(n), expo) * delta_factor(p) *
         std::sqrt(4.0 * kPi / beta) * std::exp(0.75);
}

double log_volume_expansion_residual(NormOrder p, int beta, long long n) {
  if (n < 2) throw std::invalid_argument("log_volume_expansion_residual: n >= 2");
  const double d = static_cast<double>(schatten_dimension(beta, n));
  const double logn = std::log(static_cast<double>(n));
  const double common = 0.5 * std::log(4.0 * kPi / beta);
  double lead, exact;
  if (p.is_inf()) {
    lead = -0.5 * logn + common + 0.75 - kLn2;
    exact = log_volume_schatten_inf(beta, n).value / d;
  } else if (p.value() == 2.0) {
    lead = -logn + common + 0.5;
    exact = log_volume_schatten2(beta, n).value / d;
  } else {
    throw std::invalid_argument(
        "log_volume_expansion_residual: exact volumes exist only for p in {2, inf}");
  }
  return exact - lead;
}

RadiusRatio ratio_schatten_radii(int beta, long long n) {
  if (n < 2) throw std::invalid_argument("ratio_schatten_radii: n >= 2");
  const double d = static_cast<double>(schatten_dimension(beta, n));
  const double log_ratio =
      (log_volume_schatten2(beta, n).value - log_volume_schatten_inf(beta, n).value) / d;
  const double t_n = std::sqrt(static_cast<double>(n)) * std::exp(log_ratio);
  const double e_n =
      t_n * delta_factor(NormOrder::infinity()) / delta_factor(NormOrder(2.0)) - 1.0;
  return {t_n, e_n};
}

double threshold_lp_inf(NormOrder p) {
  if (p.is_inf()) return 1.0;
  const double pv = p.value();
  return std::exp(-1.0 / pv - log_gamma(1.0 + 1.0 / pv));
}

SchattenThreshold threshold_schatten(double p, NormOrder q, int beta) {
  validate_beta(beta);
  if (!(p >= 1.0)) throw std::invalid_argument("threshold_schatten: p must be >= 1");
  if (q.is_inf()) {
    // q -> inf limit e^{1/(2p)}; proven only at (p, beta) = (2, 2).
    return {std::exp(0.5 / p), !(p == 2.0 && beta == 2)};
  }
  const double qv = q.value();
  const double value = std::exp(0.5 * (1.0 / p - 1.0 / qv)) *
                       std::pow(2.0 * p / (p + qv), 1.0 / qv);
  return {value, false};
}

GumbelConstants gumbel_constants(double p, long long n) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("gumbel_constants: finite p >= 1 required");
  if (n < 3) throw std::invalid_argument("gumbel_constants: n must be >= 3");
  const double logn = std::log(static_cast<double>(n));
  if (!(p * logn > 1.0))
    throw std::invalid_argument("gumbel_constants: requires p log n > 1");
  const double k_p = std::exp(-std::log(p) / p - log_gamma(1.0 + 1.0 / p));
  const double centering =
      p * logn - (1.0 - p) / p * std::log(p * logn) + p * std::log(k_p);
  const double scale =
      std::pow(static_cast<double>(n), 1.0 / p) * std::pow(p * logn, 1.0 - 1.0 / p);
  return {centering, scale, k_p};
}

double critical_offset(double p, long long n, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("critical_offset: t must be positive");
  const GumbelConstants gc = gumbel_constants(p, n);
  const double radius = std::exp(log_volume_lp(NormOrder(p), n).value / n);
  const double logn = std::log(static_cast<double>(n));
  return p * t * std::pow(static_cast<double>(n), 1.0 / p) * radius /
             (2.0 * std::pow(p, 1.0 / p)) * logn -
         gc.centering;
}

}  // namespace pballs
