#include "torsion/arith.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "torsion/error.hpp"

namespace torsion {

u64 PrimePower::value() const { return ipow(p, e); }

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

i64 floor_mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : small) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(n);
  while (true) {
    u64 c = rng() % (n - 1) + 1;
    u64 x = rng() % n, y = x, d = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

}  // namespace

Factorization factorize(u64 n, u64 budget) {
  if (n == 0) throw Error(Errc::InvalidArgument, "cannot factorize 0");
  if (n > budget) {
    throw Error(Errc::FactorizationTooLarge, std::to_string(n) + " exceeds factorization budget");
  }
  std::vector<u64> primes;
  for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  Factorization out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().p == p) {
      ++out.back().e;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& pp : f) phi *= (pp.p - 1) * ipow(pp.p, pp.e - 1);
  return phi;
}

u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> ds{1};
  for (const auto& pp : f) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= pp.e; ++k) {
      pk *= pp.p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

int mobius(const Factorization& f) {
  for (const auto& pp : f) {
    if (pp.e > 1) return 0;
  }
  return (f.size() % 2 == 0) ? 1 : -1;
}

unsigned omega(u64 n) { return n <= 1 ? 0 : static_cast<unsigned>(factorize(n).size()); }

u64 largest_prime_factor(u64 n) {
  if (n <= 1) return 1;
  return factorize(n).back().p;
}

u64 squarefull_part(const Factorization& f) {
  u64 r = 1;
  for (const auto& pp : f) {
    if (pp.e >= 2) r *= pp.value();
  }
  return r;
}

bool is_squarefree(u64 n) {
  if (n == 0) return false;
  for (const auto& pp : factorize(n)) {
    if (pp.e > 1) return false;
  }
  return true;
}

bool is_cubefree(u64 n) {
  if (n == 0) return false;
  for (const auto& pp : factorize(n)) {
    if (pp.e > 2) return false;
  }
  return true;
}

u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

u64 primitive_root(u64 p, unsigned e) {
  if (p == 2 || e == 0) throw Error(Errc::InvalidArgument, "primitive_root needs odd prime power");
  const u64 pe = ipow(p, e);
  const u64 phi = (p - 1) * ipow(p, e - 1);
  std::vector<u64> qs;
  for (const auto& pp : factorize(phi)) qs.push_back(pp.p);
  for (u64 g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (u64 q : qs) {
      if (pow_mod(g, phi / q, pe) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(Errc::InvalidArgument, "no primitive root");
}

ExtendedGcd extended_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
    old_t -= q * t;
    std::swap(old_t, t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 inverse_mod(i64 a, i64 m) {
  const auto eg = extended_gcd(floor_mod(a, m), m);
  if (eg.g != 1) throw Error(Errc::InvalidArgument, "element not invertible");
  return floor_mod(eg.x, m);
}

std::vector<std::uint32_t> primes_up_to(u64 n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit) {
  if (hi < 2 || lo > hi) return;
  lo = std::max<u64>(lo, 2);
  const auto base = primes_up_to(isqrt(hi));
  constexpr u64 kSegment = u64{1} << 18;
  std::vector<char> mark;
  for (u64 start = lo; start <= hi; start += kSegment) {
    const u64 end = std::min(hi, start + kSegment - 1);
    mark.assign(end - start + 1, 1);
    for (u64 p : base) {
      if (p * p > end) break;
      u64 first = std::max(p * p, (start + p - 1) / p * p);
      for (u64 j = first; j <= end; j += p) mark[j - start] = 0;
    }
    for (u64 n = start; n <= end; ++n) {
      if (mark[n - start]) visit(n);
    }
    if (end == hi) break;
  }
}

FactorSieve::FactorSieve(u64 limit) : spf_(limit + 1, 0) {
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    for (u64 j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

Factorization FactorSieve::factorize(u64 n) const {
  Factorization out;
  while (n > 1) {
    const u64 p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

double FactorSieve::mangoldt(u64 n) const {
  if (n < 2) return 0.0;
  const u64 p = spf_[n];
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

Rational::Rational(i64 num, i64 den) {
  if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i64 g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

i64 narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(Errc::InvalidArgument, "rational overflow");
  return static_cast<i64>(v);
}

}  // namespace

Rational operator+(const Rational& a, const Rational& b) {
  const i64 g = std::gcd(a.den_, b.den_);
  i128 num = static_cast<i128>(a.num_) * (b.den_ / g) + static_cast<i128>(b.num_) * (a.den_ / g);
  i128 den = static_cast<i128>(a.den_ / g) * b.den_;
  i128 x = num < 0 ? -num : num, y = den;
  while (y != 0) {
    const i128 t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    num /= x;
    den /= x;
  }
  return Rational(narrow(num), narrow(den));
}

Rational operator*(const Rational& a, const Rational& b) {
  const i64 g1 = std::gcd(a.num_, b.den_);
  const i64 g2 = std::gcd(b.num_, a.den_);
  const i128 num = static_cast<i128>(a.num_ / (g1 ? g1 : 1)) * (b.num_ / (g2 ? g2 : 1));
  const i128 den = static_cast<i128>(a.den_ / (g2 ? g2 : 1)) * (b.den_ / (g1 ? g1 : 1));
  return Rational(narrow(num), narrow(den));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

Rational Rational::parse(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      const i64 v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(v);
    }
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    std::size_t ua = 0, ub = 0;
    const i64 n = std::stoll(a, &ua), d = std::stoll(b, &ub);
    if (ua != a.size() || ub != b.size()) throw std::invalid_argument(text);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw Error(Errc::ParseError, "not a rational: '" + text + "'");
  }
}

Rational sigma_minus_one(const Factorization& f) {
  // sigma(n)/n, multiplicative: prod (p^{e+1}-1)/((p-1) p^e)
  Rational out(1);
  for (const auto& pp : f) {
    const u64 pe = pp.value();
    out = out * Rational(static_cast<i64>((pe * pp.p - 1) / (pp.p - 1)), static_cast<i64>(pe));
  }
  return out;
}

}  // namespace torsion
