#include "torsion/fields.hpp"

#include <cmath>
#include <numeric>

#include "torsion/error.hpp"
#include "torsion/kernels.hpp"

namespace torsion {

i64 fundamental_discriminant(i64 d) {
  if (d == 0 || d == 1 || !is_squarefree(static_cast<u64>(d < 0 ? -d : d))) {
    throw Error(Errc::InvalidArgument, std::to_string(d) + " is not a squarefree integer other than 0, 1");
  }
  return floor_mod(d, 4) == 1 ? d : 4 * d;
}

QuadraticField quadratic_field(i64 d) {
  const i64 disc = fundamental_discriminant(d);
  return {d, disc, disc > 0, attach_quadratic(disc)};
}

PureCubicField pure_cubic_discriminant(u64 d) {
  if (d <= 1) throw Error(Errc::InvalidArgument, "pure cubic fields need d > 1");
  PureCubicField k;
  k.d = d;
  k.a = k.b = 1;
  for (const auto& pp : factorize(d)) {
    if (pp.e >= 3) throw Error(Errc::NotCubefree, std::to_string(d) + " is not cube-free");
    (pp.e == 1 ? k.a : k.b) *= pp.p;
  }
  const u64 ab = k.a * k.b;
  const u64 d2 = (d % 9) * (d % 9) % 9;
  const i64 scale = (d2 == 1 || d2 == 8) ? 3 : 27;
  k.discriminant = -scale * static_cast<i64>(ab * ab);
  for (const auto& pp : factorize(3 * ab)) k.ramified.push_back(pp.p);
  return k;
}

std::string_view method_name(ClassGroupMethod m) {
  switch (m) {
    case ClassGroupMethod::DefiniteReduction: return "definite-reduction";
    case ClassGroupMethod::IndefiniteCycles: return "indefinite-cycles";
    case ClassGroupMethod::Ingested: return "ingested";
  }
  return "?";
}

ClassGroupMethod parse_method(std::string_view s) {
  for (auto m : {ClassGroupMethod::DefiniteReduction, ClassGroupMethod::IndefiniteCycles, ClassGroupMethod::Ingested}) {
    if (method_name(m) == s) return m;
  }
  throw Error(Errc::ParseError, "unknown class group method '" + std::string(s) + "'");
}

u64 ClassGroupStructure::h() const {
  return std::accumulate(divisors.begin(), divisors.end(), u64{1}, std::multiplies<>());
}

ClassGroupStructure class_group(i64 disc, u64 cap) {
  if (!is_fundamental_discriminant(disc)) {
    throw Error(Errc::NotFundamental, std::to_string(disc) + " is not a fundamental discriminant");
  }
  const u64 ad = static_cast<u64>(disc < 0 ? -disc : disc);
  if (ad > cap) {
    throw Error(Errc::CapExceeded, "|D| = " + std::to_string(ad) + " exceeds the class group cap " + std::to_string(cap));
  }
  const FormClassGroup g(disc);
  return {disc, g.elementary_divisors(),
          disc < 0 ? ClassGroupMethod::DefiniteReduction : ClassGroupMethod::IndefiniteCycles};
}

u64 ell_torsion(const ClassGroupStructure& g, u64 ell) {
  if (!is_prime(ell)) throw Error(Errc::InvalidArgument, "ell must be prime");
  u64 out = 1;
  for (u64 d : g.divisors) out *= std::gcd(ell, d);
  return out;
}

unsigned genus_two_rank(i64 disc, u64 cap) {
  unsigned r = 0;
  for (u64 d : class_group(disc, cap).divisors) r += d % 2 == 0;
  return r;
}

u64 gerth_bound(u64 d) {
  if (d <= 1) throw Error(Errc::InvalidArgument, "d must exceed 1");
  return ipow(9, omega(d));
}

std::string_view split_kind_name(SplitKind k) {
  switch (k) {
    case SplitKind::Quadratic: return "quadratic";
    case SplitKind::PureCubic: return "pure-cubic";
    case SplitKind::NoncyclicCubic: return "noncyclic-cubic";
    case SplitKind::CyclicCubic: return "cyclic-cubic";
  }
  return "?";
}

namespace {

template <class Pred>
SplitCount count_primes(u64 x, bool keep, Pred&& pred) {
  SplitCount out;
  if (x < 2) return out;
  for_each_prime(2, x, [&](u64 p) {
    if (!pred(p)) return;
    ++out.count;
    if (keep) out.primes.push_back(p);
  });
  return out;
}

}  // namespace

SplitCount split_prime_count(SplitKind kind, i64 parameter, u64 x, bool keep_primes) {
  switch (kind) {
    case SplitKind::Quadratic: {
      if (!is_fundamental_discriminant(parameter)) {
        throw Error(Errc::NotFundamental, std::to_string(parameter) + " is not a fundamental discriminant");
      }
      return count_primes(x, keep_primes, [&](u64 p) { return kronecker(parameter, static_cast<i64>(p)) == 1; });
    }
    case SplitKind::PureCubic: {
      if (parameter <= 1) throw Error(Errc::InvalidArgument, "pure cubic fields need d > 1");
      const auto k = pure_cubic_discriminant(static_cast<u64>(parameter));
      const u64 ad = static_cast<u64>(-k.discriminant);
      return count_primes(x, keep_primes, [&](u64 p) { return p % 3 == 2 && ad % p != 0; });
    }
    case SplitKind::NoncyclicCubic: {
      const i64 r = floor_mod(parameter, 4);
      if (parameter == 0 || (r != 0 && r != 1)) {
        throw Error(Errc::InvalidArgument, std::to_string(parameter) + " is not a discriminant");
      }
      return count_primes(x, keep_primes, [&](u64 p) { return kronecker(parameter, static_cast<i64>(p)) == -1; });
    }
    case SplitKind::CyclicCubic:
      throw Error(Errc::InvalidArgument, "cyclic cubic counting takes a character");
  }
  return {};
}

SplitCount split_prime_count(const DirichletCharacter& chi, u64 x, bool keep_primes) {
  return count_primes(x, keep_primes, [&](u64 p) { return chi.exponent(static_cast<i64>(p)) == 0; });
}

u64 squarefree_norm_ideal_count(i64 disc, u64 x) {
  if (x == 0) return 0;
  const CoefficientSeries series(disc);
  u64 total = 0;
  constexpr u64 kSegment = 1 << 16;
  for (u64 lo = 1; lo <= x; lo += kSegment) {
    for (auto a : series.segment(lo, std::min(x + 1, lo + kSegment))) total += a;
  }
  return total;
}

Signature parse_signature(std::string_view s) {
  if (s == "imaginary") return Signature::Imaginary;
  if (s == "real") return Signature::Real;
  if (s == "both") return Signature::Both;
  throw Error(Errc::ParseError, "signature must be imaginary, real or both");
}

std::vector<i64> smooth_family(u64 max_abs, double smooth_exponent, Signature sig, std::optional<std::size_t> count_cap) {
  if (!(smooth_exponent > 0.0)) throw Error(Errc::InvalidArgument, "smooth exponent must be positive");
  std::vector<i64> out;
  if (max_abs < 3) return out;
  const FactorSieve sieve(max_abs);
  auto squarefree = [&](u64 m) {
    for (const auto& pp : sieve.factorize(m)) {
      if (pp.e > 1) return false;
    }
    return true;
  };
  // |D| determines fundamentality up to sign: D = 1 mod 4 squarefree, or
  // D = 4m with m = 2, 3 mod 4 squarefree
  auto fundamental = [&](i64 d) {
    const u64 ad = static_cast<u64>(d < 0 ? -d : d);
    const i64 r = floor_mod(d, 4);
    if (r == 1) return squarefree(ad);
    if (r != 0) return false;
    const i64 m = d / 4;
    const i64 rm = floor_mod(m, 4);
    return (rm == 2 || rm == 3) && (ad / 4 == 1 || squarefree(ad / 4));
  };
  for (u64 n = 3; n <= max_abs; ++n) {
    // P(n) <= n^e
    u64 big_p = 1;
    for (u64 m = n; m > 1; m /= sieve.smallest_factor(m)) big_p = std::max<u64>(big_p, sieve.smallest_factor(m));
    if (smooth_exponent < 1.0 && std::log(static_cast<double>(big_p)) > smooth_exponent * std::log(static_cast<double>(n))) {
      continue;
    }
    for (i64 d : {-static_cast<i64>(n), static_cast<i64>(n)}) {
      if (d < 0 && sig == Signature::Real) continue;
      if (d > 0 && sig == Signature::Imaginary) continue;
      if (!fundamental(d)) continue;
      out.push_back(d);
      if (count_cap && out.size() >= *count_cap) return out;
    }
  }
  return out;
}

}  // namespace torsion
