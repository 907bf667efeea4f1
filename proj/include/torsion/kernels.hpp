#pragma once

// Gaussian-smoothed sums over ideal counts of quadratic fields, the double-log
// kernel f(s) with its prime and zero sides, and parameter planners.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "torsion/arith.hpp"
#include "torsion/characters.hpp"
#include "torsion/lfun.hpp"

namespace torsion {

struct QTPlan {
  u64 ell = 3;
  double theta = 0.0;
  double xi = 0.0;
  double delta = 0.0;
  double eta = 0.0;    // delta^{1/3}
  double varpi = 0.0;  // 1/(2 ell) - delta
  double kappa = 0.0;  // varpi / (2 + eta)
  bool window_ok = false;    // delta <= (kappa (2 theta - theta^2) - xi) / 3
  bool analytic_ok = false;  // delta <= kappa^3 / (65 (1 + 8 kappa)^3)

  /// y = kappa log q.
  double y_for(u64 q) const;
};

/// Largest delta satisfying both plan constraints, by bisection.
/// Throws Infeasible when xi >= (2 theta - theta^2) / (4 ell).
QTPlan qt_plan(u64 ell, double theta, double xi);

/// Recomputes the derived fields and constraint flags of a plan from
/// (ell, theta, xi, delta).
QTPlan qt_evaluate(u64 ell, double theta, double xi, double delta);

struct CTConfig {
  u64 ell = 3;
  double delta = 0.0;
  double vartheta = 1.0;
  i64 discriminant = 0;
  double y = 0.0;  // |Delta|^{1/(4 ell) - delta}

  double window_low() const;  // y^{(1 - delta)^2}
};

/// Throws ConstraintViolated unless delta in (0, 1/(4 ell)), vartheta in
/// [1, log|Delta|] and y > 1.
CTConfig ct_config(u64 ell, double delta, double vartheta, i64 discriminant);

/// a(n) = mu^2(n) prod_{p | n} (chi_0(p) + chi(p)) for the quadratic
/// character attached to a fundamental discriminant.
class CoefficientSeries {
 public:
  explicit CoefficientSeries(i64 discriminant);

  i64 discriminant() const { return disc_; }
  const DirichletCharacter& character() const { return chi_; }
  int a(u64 n) const;
  /// a(n) for lo <= n < hi, by a segmented sieve.
  std::vector<std::uint16_t> segment(u64 lo, u64 hi) const;
  /// sum a(n) n^{-s} as an L-product; requires Re(s) >= 1.5.
  cplx dirichlet_series(cplx s) const;

 private:
  i64 disc_;
  DirichletCharacter chi_;
  LFunction zeta_;
  LFunction l_;
  std::vector<std::pair<double, int>> local_;  // (log p, chi(p)) for small unramified p
  std::vector<double> ramified_;               // log p for p | Delta
};

/// Default summation cap: the larger of e^{8y} and the point where the
/// Gaussian weight drops below 1e-15.
double default_gaussian_cap(double y);

/// (2 sqrt(pi y))^{-1} sum_{n <= n_cap} a(n) exp(-(log n)^2 / (4y)).
/// Throws CapTooSmall when the weight at n_cap exceeds 1e-15 of the running sum.
double gaussian_weighted_sum(const CoefficientSeries& series, double y, std::optional<double> n_cap = std::nullopt);

struct ContourResult {
  cplx value;
  double height = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// (2 pi i)^{-1} int_{2 - iT}^{2 + iT} f(s) exp(s^2 y) ds.  T <= 0 selects
/// sqrt(4 + 40/y), where the discarded tail is below e^{-40}.
ContourResult contour_integral_gaussian(const CoefficientSeries& series, double y, double height = 0.0);

struct WindowMass {
  double low = 0.0;   // n <= e^{(2 - eta) y}
  double core = 0.0;  // e^{(2 - eta) y} < n <= e^{(2 + eta) y}
  double high = 0.0;  // n > e^{(2 + eta) y}
  double eta = 0.0;
  double total() const { return low + core + high; }
};

WindowMass window_mass(const CoefficientSeries& series, double y, double delta,
                       std::optional<double> n_cap = std::nullopt);

/// ((1-d) y^{s-1} - (2-d) y^{(1-d)(s-1)} + y^{(1-d)^2 (s-1)}) / (s-1)^2.
cplx cubic_kernel_f(cplx s, double y, double delta);
/// The kernel's value at s = 1 divided by (log y)^2: d^2 (1-d)(2-d) / 2.
double kernel_constant(double delta);

/// Weight min(log(p / y^{(1-d)^2}), log(y^{1-d} / p^{1-d})) / p on the window.
double triangle_weight(double p, double y, double delta);

/// Sum over primes y^{(1-d)^2} < p <= y of chi(p) (log p) * triangle_weight(p).
cplx weighted_prime_sum(const DirichletCharacter& chi, double y, double delta);

struct AnnulusRow {
  double r_low = 0.0;   // in units of 1/log q; 0 for the inner disc
  double r_high = 0.0;
  std::size_t count = 0;
  double comparison = 0.0;  // R + 1
};

struct ZeroSideSum {
  cplx sum;
  std::vector<AnnulusRow> census;
};

/// -sum f(rho) over the supplied zeros plus the dyadic annulus census around 1.
ZeroSideSum zero_side_sum(std::span<const Zero> zeros, double y, double delta, double log_q, double vartheta);

}  // namespace torsion
