#pragma once

// Incomplete character sums and the smooth-modulus (q-analogue van der
// Corput) bound with an implied constant of 1.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "torsion/arith.hpp"
#include "torsion/characters.hpp"

namespace torsion {

/// Exact sum of chi(n) over M < n <= M + N, as an element of Z[zeta_order].
CyclotomicSum partial_sum_exact(const DirichletCharacter& chi, u64 start, u64 length);
std::complex<double> partial_sum(const DirichletCharacter& chi, u64 start, u64 length);

/// Precomputed exponent table over one period; answers repeated partial-sum
/// queries for the same character in O(min(N, q)) each.
class CharacterSumTable {
 public:
  explicit CharacterSumTable(const DirichletCharacter& chi);

  const DirichletCharacter& character() const { return chi_; }
  CyclotomicSum sum_exact(u64 start, u64 length) const;
  std::complex<double> sum(u64 start, u64 length) const { return sum_exact(start, length).to_complex(); }

 private:
  DirichletCharacter chi_;
  std::vector<std::int32_t> exponent_;  // chi(n) exponent for n mod q, -1 for non-units
};

struct ArithProfile {
  u64 largest_prime = 1;  // p
  u64 squarefull = 1;     // r
  u64 divisor_count = 1;  // d(q)
  Rational sigma_minus_one{1};
};

/// Requires q >= 2.
ArithProfile arith_profile(u64 q, u64 factor_budget = kDefaultFactorBudget);

struct GRBoundParams {
  u64 modulus = 2;
  u64 start = 1;   // M
  u64 length = 1;  // N
  unsigned k = 1;
  ArithProfile profile;

  /// L = 2^{k+3} - 2.
  double big_l() const;
  static GRBoundParams make(u64 q, u64 start, u64 length, unsigned k);
};

/// M^{1-(k+3)/L} q^{1/L} d(q)^{(3k^2+11k+8)/(2L)} (log q)^{(k+3)/L}
///   * sigma_{-1}(q) * p^{(k^2+3k+4)/(4L)}, implied constant 1.
/// Throws RangeOrder if N > M.
double gr_bound(const GRBoundParams& params);

struct GRExponents {
  double big_l, m_exp, q_exp, d_exp, log_exp, p_exp;
};
GRExponents gr_exponents(unsigned k);

/// The k in [k_min, k_max] minimizing gr_bound for the given q, M, N.
unsigned gr_optimal_k(u64 q, u64 start, u64 length, unsigned k_min = 1, unsigned k_max = 20);

/// sqrt(q) log q for primitive non-principal chi.
double polya_vinogradov(const DirichletCharacter& chi);

struct SumComparison {
  std::complex<double> exact;
  double abs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

SumComparison compare_sum(const CharacterSumTable& table, u64 start, u64 length, unsigned k);

struct SumSample {
  DirichletCharacter chi;
  u64 start;
  u64 length;
  unsigned k;
};

struct FitSummary {
  u64 squarefull = 1;          // the r class of the sample
  std::size_t count = 0;
  double max_ratio = 0.0;
  std::size_t argmax = 0;      // position in the sample
  SumComparison worst;
};

/// Max of |partial_sum| / gr_bound over a sample sharing one square-full part.
/// Throws EmptySample or MixedSquarefullClass.
FitSummary fit_constant(std::span<const SumSample> sample);

}  // namespace torsion
