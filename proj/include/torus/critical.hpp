#pragma once

#include "torus/maps.hpp"

#include <Eigen/Core>

#include <vector>

namespace torus {

struct CriticalOptions {
  int grid = 256;            ///< coarse grid points per axis
  int candidates = 5;        ///< grid minima refined locally
  double x_tolerance = 1e-10;
  double eps_tolerance = 1e-6;
  double eps_limit = 1e3;    ///< give up bracketing beyond this
};

struct DetMinimum {
  double value = 1.0;
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
};

/// det(Df) = 1 + eps tr H + eps^2 det H sampled on a uniform grid of the
/// torus. tr H and det H do not depend on eps, so the grid is evaluated once
/// and reused for every eps.
class DeterminantField {
 public:
  DeterminantField(const Torus2Params<double>& params, const CriticalOptions& options = {});

  /// Global minimum over the torus: coarse grid, then Nelder-Mead from the
  /// lowest grid-local minima.
  DetMinimum minimum(double eps) const;

  double determinant(const Eigen::Vector2d& x, double eps) const;

 private:
  Torus2Map<double> unit_map_;  // eps = 1, used for H(x)
  CriticalOptions options_;
  std::vector<double> trace_;
  std::vector<double> det_;
};

DetMinimum min_det_df(const Torus2Params<double>& params, double eps, const CriticalOptions& options = {});

struct CriticalResult {
  double eps_crit = 0.0;
  Eigen::Vector2d argmin_x = Eigen::Vector2d::Zero();
  double residual = 0.0;  ///< |min det(Df)| at eps_crit
};

/// True for a1 = a4 = 0 with a2 a3 = 0, where det(Df) = 1 identically.
bool has_no_critical_value(const Torus2Params<double>& params);

/// Smallest eps with min det(Df) <= 0, by bisection on [0, eps_hi] where eps_hi
/// doubles from 1 until the minimum turns negative.
///
/// Throws NoCriticalValue for the degenerate family and CapacityError when no
/// bracket exists below options.eps_limit.
CriticalResult eps_crit(const Torus2Params<double>& params, const CriticalOptions& options = {});

}  // namespace torus
