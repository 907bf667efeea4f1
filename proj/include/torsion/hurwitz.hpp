#pragma once

#include <complex>

namespace torsion {

using cplx = std::complex<double>;

/// Value and s-derivative of zeta(s, x) - 1/(s - 1), an entire function of s,
/// by Euler-Maclaurin summation.  Requires x > 0.
struct HurwitzEntire {
  cplx value;
  cplx derivative;
};

/// Number of directly summed terms used for a given s; callers that sum many
/// Hurwitz terms with a common shift use this to keep the remainders aligned.
int hurwitz_direct_terms(cplx s);

/// Throws PrecisionBudgetExceeded if the Bernoulli tail does not reach `tol`.
HurwitzEntire hurwitz_entire(cplx s, double x, double tol);

/// (e^{(1-s) L} - 1)/(s - 1) and its s-derivative, stable near s = 1.
HurwitzEntire regularized_pole(cplx s, double log_x);

}  // namespace torsion
