#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace torsion {

struct QuadratureResult {
  std::complex<double> value;
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a complex-valued function on
/// [a, b].  Stops when the summed error estimate is below
/// max(abs_tol, rel_tol * |value|); throws QuadratureBudget after
/// `max_intervals` subdivisions.
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, std::size_t max_intervals = 4000);

}  // namespace torsion
