#pragma once

#include <Eigen/Dense>

#include "pballs/specfun.hpp"

namespace pballs {

/// Hastings-McLeod solution of Painleve II q'' = s q + 2 q^3 on a
/// descending grid, together with cumulative integrals of q, q^2 and
/// s q^2 taken from the right endpoint (needed by the CDF formulas) and
/// the Airy tail contributions beyond the starting point.
struct PainleveSolution {
  Eigen::VectorXd grid;    // descending s values, grid[0] = s_start
  Eigen::VectorXd q;
  Eigen::VectorXd qprime;

  // cum_*[k] = integral over [grid[k], grid[0]].
  Eigen::VectorXd cum_q, cum_q2, cum_sq2;
  double tail_q = 0.0;    // int_{s_start}^{inf} Ai
  double tail_q2 = 0.0;   // int_{s_start}^{inf} Ai^2
  double tail_sq2 = 0.0;  // int_{s_start}^{inf} s Ai^2

  double s_min() const { return grid[grid.size() - 1]; }
  double s_max() const { return grid[0]; }
};

/// Integrates Painleve II backward from (q, q') = (Ai, Ai')(s_start).
/// Divergence from the decaying branch (|q| > 1e3) raises an error naming
/// the blow-up point; tightening the tolerances is the remedy.
PainleveSolution solve_painleve_ii(double s_start = 8.0, double s_end = -10.0,
                                   const OdeStepperConfig& config = {},
                                   double grid_step = 0.01);

/// Tracy-Widom CDF F_beta(x), beta in {1, 2, 4}, from a Painleve solution:
///   F2 = exp(-int_x^inf (s - x) q^2 ds)
///   F1 = exp(-1/2 int_x^inf q ds) sqrt(F2)
///   F4 = cosh(1/2 int_x^inf q ds) sqrt(F2)   (no argument rescaling)
double tw_cdf(int beta, double x, const PainleveSolution& solution);

/// Tabulated CDF with monotone cubic interpolation between nodes.
class TWTable {
 public:
  TWTable(int beta, Eigen::VectorXd grid, Eigen::VectorXd F);

  int beta() const { return beta_; }
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return F_; }

  /// Interpolated CDF value; clamps to {0, 1} outside the grid.
  double cdf(double x) const;

 private:
  int beta_;
  Eigen::VectorXd grid_;  // ascending x
  Eigen::VectorXd F_;
  Eigen::VectorXd slope_;  // Fritsch-Carlson monotone slopes
};

/// Tabulates F_beta on the grid x_min, x_min + step, ..., x_max. A
/// monotonicity violation is a numerical-accuracy error, never clamped.
TWTable tw_cdf_table(int beta, double x_min, double x_max, double step,
                     const PainleveSolution& solution);

}  // namespace pballs
