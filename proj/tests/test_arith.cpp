#include <doctest.h>

#include <cmath>
#include <numeric>

#include "torsion/arith.hpp"
#include "torsion/error.hpp"

using namespace torsion;

namespace {

std::vector<u64> trial_primes(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

TEST_CASE("factorize agrees with trial division") {
  for (u64 n = 2; n <= 5000; ++n) {
    std::vector<u64> flat;
    for (const auto& pp : factorize(n)) {
      for (unsigned i = 0; i < pp.e; ++i) flat.push_back(pp.p);
    }
    CHECK(flat == trial_primes(n));
  }
  const u64 big = 1000000007ull * 998244353ull;
  const auto f = factorize(big);
  REQUIRE(f.size() == 2);
  CHECK(f[0].p == 998244353ull);
  CHECK(f[1].p == 1000000007ull);
}

TEST_CASE("phi and mobius against gcd counting") {
  for (u64 n = 1; n <= 500; ++n) {
    u64 count = 0;
    for (u64 a = 1; a <= n; ++a) count += std::gcd(a, n) == 1;
    CHECK(euler_phi(n) == count);
  }
  CHECK(mobius(factorize(30)) == -1);
  CHECK(mobius(factorize(12)) == 0);
  CHECK(mobius(factorize(35)) == 1);
}

TEST_CASE("primality and prime listing") {
  CHECK(primes_up_to(1000000).size() == 78498);
  const auto small = primes_up_to(2000);
  for (u64 n = 0; n <= 2000; ++n) {
    CHECK(is_prime(n) == std::binary_search(small.begin(), small.end(), static_cast<std::uint32_t>(n)));
  }
  CHECK(is_prime(1000000007ull));
  CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  u64 seen = 0;
  for_each_prime(1000000, 1001000, [&](u64) { ++seen; });
  u64 expect = 0;
  for (u64 n = 1000000; n <= 1001000; ++n) expect += is_prime(n);
  CHECK(seen == expect);
}

TEST_CASE("integer helpers") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(15) == 3);
  CHECK(isqrt(16) == 4);
  CHECK(isqrt(~0ull) == 4294967295ull);
  CHECK(ipow(3, 5) == 243);
  CHECK(floor_mod(-7, 3) == 2);
  CHECK(inverse_mod(3, 7) == 5);
  const auto g = extended_gcd(240, 46);
  CHECK(g.g == 2);
  CHECK(240 * g.x + 46 * g.y == 2);
  CHECK(squarefull_part(factorize(2 * 2 * 2 * 3 * 5 * 5)) == 200);
  CHECK(is_squarefree(30030));
  CHECK_FALSE(is_cubefree(24));
  CHECK(largest_prime_factor(30030) == 13);
}

TEST_CASE("primitive roots have full order") {
  for (u64 p : {3ull, 5ull, 7ull, 11ull, 23ull, 101ull}) {
    for (unsigned e = 1; e <= 3; ++e) {
      const u64 m = ipow(p, e);
      const u64 g = primitive_root(p, e);
      const u64 phi = euler_phi(m);
      for (u64 d : divisors(factorize(phi))) {
        if (d < phi) CHECK(pow_mod(g, d, m) != 1);
      }
      CHECK(pow_mod(g, phi, m) == 1);
    }
  }
}

TEST_CASE("factor sieve") {
  FactorSieve s(10000);
  for (u64 n = 2; n <= 10000; ++n) CHECK(s.factorize(n) == factorize(n));
  CHECK(s.mangoldt(8) == doctest::Approx(std::log(2.0)));
  CHECK(s.mangoldt(12) == 0.0);
}

TEST_CASE("rationals") {
  CHECK(Rational::parse("1/343") == Rational(1, 343));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(sigma_minus_one(factorize(12)) == Rational(7, 3));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("x"), Error);
}
