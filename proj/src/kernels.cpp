#include "torsion/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torsion/error.hpp"
#include "torsion/quadrature.hpp"

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr u64 kProductLimit = 10000;
constexpr double kMaxGaussianCap = 1.1e12;
const double kPrimeWindowCap = std::exp(16.0);

void require_kernel_params(double y, double delta) {
  if (!(y > 1.0)) throw Error(Errc::InvalidArgument, "y must exceed 1");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::InvalidArgument, "delta must lie in (0, 1)");
}

// Visits (n, a(n)) for 1 <= n <= cap with a(n) != 0, in increasing n.
template <class Visit>
void for_each_coefficient(const CoefficientSeries& series, u64 cap, Visit&& visit) {
  constexpr u64 kSegment = 1 << 16;
  for (u64 lo = 1; lo <= cap; lo += kSegment) {
    const u64 hi = std::min(cap + 1, lo + kSegment);
    const auto a = series.segment(lo, hi);
    for (u64 n = lo; n < hi; ++n) {
      if (a[n - lo] != 0) visit(n, a[n - lo]);
    }
  }
}

u64 resolve_cap(double y, std::optional<double> n_cap) {
  const double cap = n_cap ? *n_cap : default_gaussian_cap(y);
  if (!(cap >= 1.0)) throw Error(Errc::CapTooSmall, "summation cap below 1");
  if (cap > kMaxGaussianCap) throw Error(Errc::InvalidArgument, "summation cap too large for direct summation");
  return static_cast<u64>(std::floor(cap));
}

}  // namespace

double QTPlan::y_for(u64 q) const { return kappa * std::log(static_cast<double>(q)); }

QTPlan qt_evaluate(u64 ell, double theta, double xi, double delta) {
  QTPlan p;
  p.ell = ell;
  p.theta = theta;
  p.xi = xi;
  p.delta = delta;
  p.eta = std::cbrt(delta);
  p.varpi = 1.0 / (2.0 * static_cast<double>(ell)) - delta;
  p.kappa = p.varpi / (2.0 + p.eta);
  p.window_ok = delta <= (p.kappa * (2.0 * theta - theta * theta) - xi) / 3.0;
  const double k1 = 1.0 + 8.0 * p.kappa;
  p.analytic_ok = delta <= p.kappa * p.kappa * p.kappa / (65.0 * k1 * k1 * k1);
  return p;
}

QTPlan qt_plan(u64 ell, double theta, double xi) {
  if (ell < 3 || !is_prime(ell)) throw Error(Errc::InvalidArgument, "ell must be a prime >= 3");
  if (!(theta > 0.0 && theta < 0.5)) throw Error(Errc::InvalidArgument, "theta must lie in (0, 1/2)");
  if (!(xi > 0.0)) throw Error(Errc::InvalidArgument, "xi must be positive");
  const double limit = (2.0 * theta - theta * theta) / (4.0 * static_cast<double>(ell));
  if (xi >= limit) {
    throw Error(Errc::Infeasible, "xi = " + std::to_string(xi) + " is not below (2 theta - theta^2)/(4 ell) = " +
                                      std::to_string(limit));
  }
  auto ok = [&](double d) {
    const auto p = qt_evaluate(ell, theta, xi, d);
    return p.window_ok && p.analytic_ok && p.varpi > 0.0;
  };
  double lo = 0.0, hi = 1.0 / (2.0 * static_cast<double>(ell));
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (ok(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0) || !ok(lo)) throw Error(Errc::Infeasible, "no positive delta satisfies the plan constraints");
  return qt_evaluate(ell, theta, xi, lo);
}

double CTConfig::window_low() const { return std::pow(y, (1.0 - delta) * (1.0 - delta)); }

CTConfig ct_config(u64 ell, double delta, double vartheta, i64 discriminant) {
  if (ell < 2 || !is_prime(ell)) throw Error(Errc::InvalidArgument, "ell must be prime");
  const double big_l = static_cast<double>(ell);
  if (!(delta > 0.0 && delta < 1.0 / (4.0 * big_l))) {
    throw Error(Errc::ConstraintViolated, "delta must lie in (0, 1/(4 ell))");
  }
  const double abs_d = std::abs(static_cast<double>(discriminant));
  if (!(abs_d > 1.0)) throw Error(Errc::ConstraintViolated, "|Delta| must exceed 1");
  if (!(vartheta >= 1.0 && vartheta <= std::log(abs_d))) {
    throw Error(Errc::ConstraintViolated, "vartheta must lie in [1, log|Delta|]");
  }
  CTConfig c{ell, delta, vartheta, discriminant, std::pow(abs_d, 1.0 / (4.0 * big_l) - delta)};
  if (!(c.y > 1.0)) throw Error(Errc::ConstraintViolated, "y must exceed 1");
  return c;
}

CoefficientSeries::CoefficientSeries(i64 discriminant)
    : disc_(discriminant),
      chi_(attach_quadratic(discriminant)),
      zeta_(DirichletCharacter::principal(1), 1e-14),
      l_(chi_, 1e-14) {
  for (auto p : primes_up_to(kProductLimit)) {
    const int k = kronecker(disc_, p);
    const double lp = std::log(static_cast<double>(p));
    if (k == 0) {
      ramified_.push_back(lp);
    } else {
      local_.emplace_back(lp, k);
    }
  }
  for (const auto& pp : chi_.factorization()) {
    if (pp.p > kProductLimit) ramified_.push_back(std::log(static_cast<double>(pp.p)));
  }
}

int CoefficientSeries::a(u64 n) const {
  if (n == 0) return 0;
  int out = 1;
  for (const auto& pp : factorize(n)) {
    if (pp.e >= 2) return 0;
    const int k = kronecker(disc_, static_cast<i64>(pp.p));
    if (k == 0) return 0;
    out *= 1 + k;
  }
  return out;
}

std::vector<std::uint16_t> CoefficientSeries::segment(u64 lo, u64 hi) const {
  if (lo == 0) throw Error(Errc::InvalidArgument, "coefficients start at n = 1");
  if (hi <= lo) return {};
  const u64 len = hi - lo;
  std::vector<std::uint16_t> val(len, 1);
  std::vector<u64> rem(len);
  for (u64 i = 0; i < len; ++i) rem[i] = lo + i;
  for (auto p32 : primes_up_to(isqrt(hi - 1))) {
    const u64 p = p32;
    const int k = kronecker(disc_, static_cast<i64>(p));
    const auto mult = static_cast<std::uint16_t>(k == 0 ? 0 : 1 + k);
    const u64 p2 = p * p;
    for (u64 m = (lo + p - 1) / p * p; m < hi; m += p) {
      const u64 i = m - lo;
      if (m % p2 == 0) {
        val[i] = 0;
      } else {
        val[i] = static_cast<std::uint16_t>(val[i] * mult);
      }
      rem[i] /= p;
    }
  }
  for (u64 i = 0; i < len; ++i) {
    if (val[i] != 0 && rem[i] > 1) {
      const int k = kronecker(disc_, static_cast<i64>(rem[i]));
      val[i] = static_cast<std::uint16_t>(k == 0 ? 0 : val[i] * (1 + k));
    }
  }
  return val;
}

cplx CoefficientSeries::dirichlet_series(cplx s) const {
  if (!(s.real() >= 1.5)) throw Error(Errc::InvalidArgument, "series evaluation needs Re(s) >= 1.5");
  cplx v = zeta_.eval(s).value * l_.eval(s).value;
  for (double lp : ramified_) v *= 1.0 - std::exp(-s * lp);
  for (const auto& [lp, c] : local_) {
    const cplx x = std::exp(-s * lp);
    const cplx x2 = x * x;
    v *= 1.0 - static_cast<double>(1 + c + c * c) * x2 + static_cast<double>(c * (1 + c)) * x2 * x;
  }
  return v;
}

double default_gaussian_cap(double y) {
  if (!(y > 0.0)) throw Error(Errc::InvalidArgument, "y must be positive");
  return std::exp(std::max(8.0 * y, std::sqrt(4.0 * y * std::log(1e15))));
}

double gaussian_weighted_sum(const CoefficientSeries& series, double y, std::optional<double> n_cap) {
  if (!(y > 0.0)) throw Error(Errc::InvalidArgument, "y must be positive");
  const u64 cap = resolve_cap(y, n_cap);
  const double inv4y = 1.0 / (4.0 * y);
  double total = 0.0;
  for_each_coefficient(series, cap, [&](u64 n, int a) {
    const double ln = std::log(static_cast<double>(n));
    total += a * std::exp(-ln * ln * inv4y);
  });
  const double lc = std::log(static_cast<double>(cap));
  const double last = std::exp(-lc * lc * inv4y);
  if (cap > 1 && last > 1e-15 * total) {
    throw Error(Errc::CapTooSmall, "Gaussian weight at the cap is " + std::to_string(last) + " of a running sum " +
                                       std::to_string(total));
  }
  return total / (2.0 * std::sqrt(kPi * y));
}

ContourResult contour_integral_gaussian(const CoefficientSeries& series, double y, double height) {
  if (!(y > 0.0)) throw Error(Errc::InvalidArgument, "y must be positive");
  const double big_t = height > 0.0 ? height : std::sqrt(4.0 + 40.0 / y);
  auto integrand = [&](double t) {
    const cplx s(2.0, t);
    return series.dirichlet_series(s) * std::exp(s * s * y) / (2.0 * kPi);
  };
  const double scale = std::abs(integrand(0.0)) * 2.0 * big_t;
  const auto q = integrate(integrand, -big_t, big_t, 1e-14 * scale, 1e-11, 20000);
  return {q.value, big_t, q.error, q.intervals};
}

WindowMass window_mass(const CoefficientSeries& series, double y, double delta, std::optional<double> n_cap) {
  if (!(y > 0.0)) throw Error(Errc::InvalidArgument, "y must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::InvalidArgument, "delta must lie in (0, 1)");
  WindowMass w;
  w.eta = std::cbrt(delta);
  const u64 cap = resolve_cap(y, n_cap);
  const double inv4y = 1.0 / (4.0 * y);
  const double lo_edge = (2.0 - w.eta) * y, hi_edge = (2.0 + w.eta) * y;
  for_each_coefficient(series, cap, [&](u64 n, int a) {
    const double ln = std::log(static_cast<double>(n));
    const double term = a * std::exp(-ln * ln * inv4y);
    (ln <= lo_edge ? w.low : ln <= hi_edge ? w.core : w.high) += term;
  });
  const double norm = 1.0 / (2.0 * std::sqrt(kPi * y));
  w.low *= norm;
  w.core *= norm;
  w.high *= norm;
  return w;
}

double kernel_constant(double delta) { return 0.5 * delta * delta * (1.0 - delta) * (2.0 - delta); }

cplx cubic_kernel_f(cplx s, double y, double delta) {
  require_kernel_params(y, delta);
  const double big_l = std::log(y);
  const double u = 1.0 - delta;
  const cplx w = s - 1.0;
  const cplx z = w * big_l;
  if (std::abs(z) < 0.5) {
    // removable singularity: L^2 sum_{k>=2} c_k z^{k-2} / k!
    cplx sum = 0.0, zp = 1.0;
    double fact = 2.0, uk = u * u;
    for (int k = 2; k <= 40; ++k) {
      if (k > 2) fact *= k;
      const double ck = u - (1.0 + u) * uk + uk * uk;
      sum += ck * zp / fact;
      zp *= z;
      uk *= u;
    }
    return big_l * big_l * sum;
  }
  return (u * std::exp(z) - (1.0 + u) * std::exp(u * z) + std::exp(u * u * z)) / (w * w);
}

double triangle_weight(double p, double y, double delta) {
  const double big_l = std::log(y);
  const double lp = std::log(p);
  const double lo = (1.0 - delta) * (1.0 - delta) * big_l;
  if (lp <= lo || lp > big_l) return 0.0;
  return std::min(lp - lo, (1.0 - delta) * (big_l - lp)) / p;
}

cplx weighted_prime_sum(const DirichletCharacter& chi, double y, double delta) {
  require_kernel_params(y, delta);
  if (y > kPrimeWindowCap) throw Error(Errc::InvalidArgument, "y above the prime-window cap e^16");
  const double lo = std::pow(y, (1.0 - delta) * (1.0 - delta));
  const u64 first = static_cast<u64>(std::floor(lo)) + 1;
  const u64 last = static_cast<u64>(std::floor(y));
  if (last < 2 || first > last) return 0.0;
  std::vector<cplx> roots(chi.order());
  for (u64 k = 0; k < chi.order(); ++k) roots[k] = std::polar(1.0, 2.0 * kPi * k / chi.order());
  cplx total = 0.0;
  for_each_prime(std::max<u64>(first, 2), last, [&](u64 p) {
    const i64 e = chi.exponent(static_cast<i64>(p));
    if (e < 0) return;
    const double pd = static_cast<double>(p);
    total += roots[e] * (std::log(pd) * triangle_weight(pd, y, delta));
  });
  return total;
}

ZeroSideSum zero_side_sum(std::span<const Zero> zeros, double y, double delta, double log_q, double vartheta) {
  require_kernel_params(y, delta);
  if (!(log_q > 0.0)) throw Error(Errc::InvalidArgument, "log q must be positive");
  if (!(vartheta >= 1.0)) throw Error(Errc::InvalidArgument, "vartheta must be at least 1");
  ZeroSideSum out;
  const double r0 = std::exp2(std::floor(std::log2(vartheta)));
  double reach = r0;
  for (const auto& z : zeros) reach = std::max(reach, std::abs(cplx(z.beta, z.gamma) - 1.0) * log_q);
  out.census.push_back({0.0, r0, 0, r0 + 1.0});
  for (double r = r0; r < reach; r *= 2.0) out.census.push_back({r, 2.0 * r, 0, r + 1.0});
  for (const auto& z : zeros) {
    const cplx rho(z.beta, z.gamma);
    out.sum -= cubic_kernel_f(rho, y, delta);
    const double d = std::abs(rho - 1.0) * log_q;
    for (auto& row : out.census) {
      if (d <= row.r_high && (row.r_low == 0.0 || d > row.r_low)) {
        ++row.count;
        break;
      }
    }
  }
  return out;
}

}  // namespace torsion
