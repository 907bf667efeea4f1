#pragma once

// Elementary integer arithmetic shared by every module: modular arithmetic,
// factorization, divisor functions, prime sieves and a small exact rational.

#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace torsion {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

struct PrimePower {
  u64 p = 0;
  unsigned e = 0;

  u64 value() const;
  bool operator==(const PrimePower&) const = default;
};

/// Prime factorization in increasing order of p.
using Factorization = std::vector<PrimePower>;

/// Largest integer `factorize` accepts by default.
inline constexpr u64 kDefaultFactorBudget = 4'000'000'000'000'000'000ull;

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
/// Least nonnegative residue of a mod m (m > 0).
i64 floor_mod(i64 a, i64 m);
u64 isqrt(u64 n);
u64 ipow(u64 base, unsigned exp);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(u64 n);

/// Throws Error(FactorizationTooLarge) when n exceeds `budget`.
Factorization factorize(u64 n, u64 budget = kDefaultFactorBudget);

u64 euler_phi(const Factorization& f);
u64 euler_phi(u64 n);
std::vector<u64> divisors(const Factorization& f);
int mobius(const Factorization& f);
unsigned omega(u64 n);
u64 largest_prime_factor(u64 n);
/// Largest divisor of n whose prime factors all occur to exponent >= 2.
u64 squarefull_part(const Factorization& f);
bool is_squarefree(u64 n);
bool is_cubefree(u64 n);
u64 lcm_u64(u64 a, u64 b);

/// Smallest primitive root modulo p^e for an odd prime p.
u64 primitive_root(u64 p, unsigned e);

/// Modular inverse of a mod m; requires gcd(a, m) = 1.
i64 inverse_mod(i64 a, i64 m);

struct ExtendedGcd {
  i64 g, x, y;  // g = a*x + b*y, g >= 0
};
ExtendedGcd extended_gcd(i64 a, i64 b);

std::vector<std::uint32_t> primes_up_to(u64 n);

/// Calls visit(p) for every prime lo <= p <= hi in increasing order using a
/// segmented sieve of Eratosthenes.
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit);

/// Smallest-prime-factor table for 2 <= n <= limit.
class FactorSieve {
 public:
  explicit FactorSieve(u64 limit);

  u64 limit() const { return spf_.size() - 1; }
  std::uint32_t smallest_factor(u64 n) const { return spf_[n]; }
  bool is_prime(u64 n) const { return n >= 2 && spf_[n] == n; }
  Factorization factorize(u64 n) const;
  /// von Mangoldt function.
  double mangoldt(u64 n) const;

 private:
  std::vector<std::uint32_t> spf_;
};

/// Exact rational with 64-bit parts, always normalized (den > 0, reduced).
class Rational {
 public:
  Rational() = default;
  Rational(i64 num, i64 den = 1);

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  /// Parses "a/b" or a decimal integer.
  static Rational parse(const std::string& text);

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

/// Sum of 1/d over the divisors d of n.
Rational sigma_minus_one(const Factorization& f);

}  // namespace torsion
