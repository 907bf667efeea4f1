#include "torsion/hurwitz.hpp"

#include <array>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>
#include <numbers>

#include "torsion/error.hpp"

namespace torsion {

namespace {

constexpr int kMaxBernoulli = 70;

// B_{2j} / (2j)!
const std::array<double, kMaxBernoulli + 1>& bernoulli_coefficients() {
  static const auto table = [] {
    std::array<double, kMaxBernoulli + 1> t{};
    for (int j = 1; j <= kMaxBernoulli; ++j) {
      t[j] = boost::math::bernoulli_b2n<double>(j) / boost::math::factorial<double>(2 * j);
    }
    return t;
  }();
  return table;
}

}  // namespace

int hurwitz_direct_terms(cplx s) {
  return std::max(10, static_cast<int>(std::ceil((std::abs(s) + 40.0) / std::numbers::pi)));
}

HurwitzEntire regularized_pole(cplx s, double log_x) {
  const cplx w = s - 1.0;
  const cplx z = -w * log_x;
  if (std::abs(z) < 0.5) {
    // (e^z - 1)/z and its z-derivative by series
    cplx e1 = 0.0, e1d = 0.0, zp = 1.0, zq = 0.0;
    double fact = 1.0;
    for (int k = 1; k <= 25; ++k) {
      fact *= k;
      e1 += zp / fact;
      if (k >= 2) e1d += static_cast<double>(k - 1) * zq / fact;
      zq = zp;
      zp *= z;
    }
    return {-log_x * e1, log_x * log_x * e1d};
  }
  const cplx ez = std::exp(z);
  return {(ez - 1.0) / w, (-log_x * ez * w - (ez - 1.0)) / (w * w)};
}

HurwitzEntire hurwitz_entire(cplx s, double x, double tol) {
  if (!(x > 0.0)) throw Error(Errc::InvalidArgument, "Hurwitz shift must be positive");
  const int n_direct = hurwitz_direct_terms(s);
  cplx sum = 0.0, dsum = 0.0;
  for (int k = 0; k < n_direct; ++k) {
    const double lv = std::log(x + k);
    const cplx t = std::exp(-s * lv);
    sum += t;
    dsum -= lv * t;
  }
  const double big_x = x + n_direct;
  const double lx = std::log(big_x);
  const cplx x_ms = std::exp(-s * lx);

  const auto pole = regularized_pole(s, lx);
  sum += pole.value;
  dsum += pole.derivative;
  sum += 0.5 * x_ms;
  dsum -= 0.5 * lx * x_ms;

  const auto& coef = bernoulli_coefficients();
  cplx poly = s, dpoly = 1.0;
  cplx power = x_ms / big_x;
  const double inv_x2 = 1.0 / (big_x * big_x);
  for (int j = 1; j <= kMaxBernoulli; ++j) {
    const cplx term = coef[j] * poly * power;
    const cplx dterm = coef[j] * (dpoly - poly * lx) * power;
    sum += term;
    dsum += dterm;
    if (j >= 2 && std::abs(term) <= tol * std::max(1.0, std::abs(sum)) &&
        std::abs(dterm) <= tol * std::max(1.0, std::abs(dsum))) {
      return {sum, dsum};
    }
    const cplx a = s + (2.0 * j - 1.0), b = s + 2.0 * j;
    dpoly = dpoly * a * b + poly * (a + b);
    poly *= a * b;
    power *= inv_x2;
  }
  throw Error(Errc::PrecisionBudgetExceeded, "Euler-Maclaurin tail did not converge");
}

}  // namespace torsion
