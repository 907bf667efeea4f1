#include "torsion/charsums.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "torsion/error.hpp"

namespace torsion {

CharacterSumTable::CharacterSumTable(const DirichletCharacter& chi) : chi_(chi) {
  const u64 q = chi.modulus();
  exponent_.resize(q);
  for (u64 n = 0; n < q; ++n) exponent_[n] = static_cast<std::int32_t>(chi.exponent(static_cast<i64>(n)));
}

CyclotomicSum CharacterSumTable::sum_exact(u64 start, u64 length) const {
  const u64 q = chi_.modulus();
  CyclotomicSum s(chi_.order());
  const u64 periods = length / q;
  if (periods > 0) {
    // a full period contributes each value phi(q)/order times
    const u64 per_value = euler_phi(chi_.factorization()) / chi_.order();
    for (u64 k = 0; k < chi_.order(); ++k) s.add_exponent(k, static_cast<i64>(periods * per_value));
  }
  u64 n = (start + 1) % q;
  for (u64 i = 0, rem = length % q; i < rem; ++i) {
    const auto e = exponent_[n];
    if (e >= 0) s.add_exponent(static_cast<u64>(e));
    if (++n == q) n = 0;
  }
  return s;
}

CyclotomicSum partial_sum_exact(const DirichletCharacter& chi, u64 start, u64 length) {
  return CharacterSumTable(chi).sum_exact(start, length);
}

std::complex<double> partial_sum(const DirichletCharacter& chi, u64 start, u64 length) {
  return partial_sum_exact(chi, start, length).to_complex();
}

ArithProfile arith_profile(u64 q, u64 factor_budget) {
  if (q < 2) throw Error(Errc::InvalidArgument, "arith_profile needs q >= 2");
  const auto f = factorize(q, factor_budget);
  ArithProfile out;
  out.largest_prime = f.back().p;
  out.squarefull = squarefull_part(f);
  out.divisor_count = 1;
  for (const auto& pp : f) out.divisor_count *= pp.e + 1;
  out.sigma_minus_one = sigma_minus_one(f);
  return out;
}

double GRBoundParams::big_l() const { return std::ldexp(1.0, static_cast<int>(k) + 3) - 2.0; }

GRBoundParams GRBoundParams::make(u64 q, u64 start, u64 length, unsigned k) {
  return {q, start, length, k, arith_profile(q)};
}

GRExponents gr_exponents(unsigned k) {
  if (k == 0) throw Error(Errc::InvalidArgument, "differencing depth k must be >= 1");
  const double kk = k;
  const double big_l = std::ldexp(1.0, static_cast<int>(k) + 3) - 2.0;
  return {big_l,
          1.0 - (kk + 3.0) / big_l,
          1.0 / big_l,
          (3.0 * kk * kk + 11.0 * kk + 8.0) / (2.0 * big_l),
          (kk + 3.0) / big_l,
          (kk * kk + 3.0 * kk + 4.0) / (4.0 * big_l)};
}

double gr_bound(const GRBoundParams& params) {
  if (params.length > params.start) {
    throw Error(Errc::RangeOrder, "N = " + std::to_string(params.length) + " exceeds M = " + std::to_string(params.start));
  }
  if (params.modulus < 2) throw Error(Errc::InvalidArgument, "bound needs q >= 2");
  const auto x = gr_exponents(params.k);
  const auto& pr = params.profile;
  const double log_q = std::log(static_cast<double>(params.modulus));
  const double log_bound = x.m_exp * std::log(static_cast<double>(params.start)) + x.q_exp * log_q +
                           x.d_exp * std::log(static_cast<double>(pr.divisor_count)) + x.log_exp * std::log(log_q) +
                           std::log(pr.sigma_minus_one.to_double()) +
                           x.p_exp * std::log(static_cast<double>(pr.largest_prime));
  return std::exp(log_bound);
}

unsigned gr_optimal_k(u64 q, u64 start, u64 length, unsigned k_min, unsigned k_max) {
  auto params = GRBoundParams::make(q, start, length, k_min);
  unsigned best_k = k_min;
  double best = std::numeric_limits<double>::infinity();
  for (unsigned k = k_min; k <= k_max; ++k) {
    params.k = k;
    const double b = gr_bound(params);
    if (b < best) {
      best = b;
      best_k = k;
    }
  }
  return best_k;
}

double polya_vinogradov(const DirichletCharacter& chi) {
  if (chi.is_principal() || !chi.is_primitive()) {
    throw Error(Errc::NotPrimitive, chi.str() + " is not primitive and non-principal");
  }
  const double q = static_cast<double>(chi.modulus());
  return std::sqrt(q) * std::log(q);
}

SumComparison compare_sum(const CharacterSumTable& table, u64 start, u64 length, unsigned k) {
  SumComparison c;
  c.exact = table.sum(start, length);
  c.abs = std::abs(c.exact);
  c.bound = gr_bound(GRBoundParams::make(table.character().modulus(), start, length, k));
  c.ratio = c.abs / c.bound;
  return c;
}

FitSummary fit_constant(std::span<const SumSample> sample) {
  if (sample.empty()) throw Error(Errc::EmptySample, "fit_constant needs at least one entry");
  FitSummary out;
  out.squarefull = squarefull_part(factorize(sample.front().chi.modulus()));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& s = sample[i];
    const u64 r = squarefull_part(factorize(s.chi.modulus()));
    if (r != out.squarefull) {
      throw Error(Errc::MixedSquarefullClass,
                  "square-full parts " + std::to_string(out.squarefull) + " and " + std::to_string(r) + " in one fit");
    }
  }
  const DirichletCharacter* cached = nullptr;
  std::optional<CharacterSumTable> table;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& s = sample[i];
    if (cached == nullptr || !(*cached == s.chi)) {
      table.emplace(s.chi);
      cached = &s.chi;
    }
    const auto c = compare_sum(*table, s.start, s.length, s.k);
    if (out.count == 0 || c.ratio > out.max_ratio) {
      out.max_ratio = c.ratio;
      out.argmax = i;
      out.worst = c;
    }
    ++out.count;
  }
  return out;
}

}  // namespace torsion
