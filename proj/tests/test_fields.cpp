#include <doctest.h>

#include <array>
#include <numeric>

#include "torsion/error.hpp"
#include "torsion/fields.hpp"
#include "torsion/forms.hpp"

using namespace torsion;

namespace {

std::size_t brute_reduced_count(i64 disc) {
  std::size_t count = 0;
  const i64 n = -disc;
  for (i64 a = 1; 3 * a * a <= n; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
      ++count;
    }
  }
  return count;
}

// primitive ideals [a, b + omega] of squarefree norm a coprime to disc, for a <= x
u64 brute_ideal_count(i64 disc, u64 x) {
  u64 count = 0;
  const i64 c0 = (disc * disc - disc) / 4;  // N(b + omega) = b^2 + b disc + c0
  for (u64 a = 1; a <= x; ++a) {
    if (!is_squarefree(a) || std::gcd(a, static_cast<u64>(std::llabs(disc))) != 1) continue;
    const i64 m = static_cast<i64>(a);
    for (i64 b = 0; b < m; ++b) {
      if (floor_mod(b * b + b * disc + c0, m) == 0) ++count;
    }
  }
  return count;
}

// elementary symmetric functions of the three embeddings of x + y t + z t^2 / b with t^3 = a b^2
std::array<double, 3> char_poly(u64 a, u64 b, double x, double y, double z) {
  const double t = std::cbrt(static_cast<double>(a * b * b));
  std::array<std::complex<double>, 3> v;
  for (int k = 0; k < 3; ++k) {
    const auto w = std::polar(1.0, 2 * M_PI * k / 3);
    v[k] = x + y * t * w + z * t * t * w * w / static_cast<double>(b);
  }
  return {(v[0] + v[1] + v[2]).real(), (v[0] * v[1] + v[0] * v[2] + v[1] * v[2]).real(), (v[0] * v[1] * v[2]).real()};
}

bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-6; }

// discriminant from an explicit order: Z[t, t^2/b] has discriminant -27 a^2 b^2,
// and the index at 3 is 3 exactly when some (x + y t + z t^2/b)/3 is integral
i64 index_form_discriminant(u64 d) {
  u64 a = 1, b = 1;
  for (const auto& pp : factorize(d)) (pp.e == 1 ? a : b) *= pp.p;
  i64 disc = -27 * static_cast<i64>(a * a * b * b);
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      for (int z = 0; z < 3; ++z) {
        if (y == 0 && z == 0) continue;
        const auto e = char_poly(a, b, x, y, z);
        if (near_integer(e[0] / 3) && near_integer(e[1] / 9) && near_integer(e[2] / 27)) return disc / 9;
      }
    }
  }
  return disc;
}

}  // namespace

TEST_CASE("definite reduction and composition") {
  const BinaryQuadraticForm f{2, 1, 3};
  CHECK(f.discriminant() == -23);
  CHECK(is_reduced_definite(f));
  CHECK(reduce_definite({3, 5, 4}) == BinaryQuadraticForm{2, 1, 3});
  CHECK(reduce_definite({6, 11, 6}) == BinaryQuadraticForm{1, 1, 6});
  const auto f2 = reduce_definite(compose(f, f));
  const auto f3 = reduce_definite(compose(f2, f));
  CHECK(f3 == principal_form(-23));
  CHECK(reduce_definite(compose(f, f.inverse())) == principal_form(-23));
  CHECK(enumerate_reduced_definite(-23).size() == 3);
}

TEST_CASE("class group axioms") {
  for (i64 disc : {-23ll, -84ll, -420ll, -3299ll, 229ll, 316ll, 1785ll, 40ll}) {
    const FormClassGroup g(disc);
    const std::size_t h = g.order();
    for (std::size_t i = 0; i < h; ++i) {
      CHECK(g.compose(i, g.identity()) == i);
      CHECK(g.compose(i, g.inverse(i)) == g.identity());
      for (std::size_t j = 0; j < h; ++j) {
        CHECK(g.compose(i, j) == g.compose(j, i));
        for (std::size_t k = 0; k < std::min<std::size_t>(h, 6); ++k) {
          CHECK(g.compose(g.compose(i, j), k) == g.compose(i, g.compose(j, k)));
        }
      }
      CHECK(g.power(i, h) == g.identity());
    }
    u64 prod = 1;
    for (u64 d : g.elementary_divisors()) prod *= d;
    CHECK(prod == h);
  }
}

TEST_CASE("known class group structures") {
  const std::vector<std::pair<i64, std::vector<u64>>> table = {
      {-23, {3}},  {-4, {}},    {40, {2}},       {-84, {2, 2}}, {-420, {2, 2, 2}},
      {229, {3}},  {1785, {2, 2, 4}}, {-3299, {3, 9}}, {-4027, {3, 3}}, {316, {6}}};
  for (const auto& [disc, divs] : table) {
    const auto g = class_group(disc);
    CHECK(g.divisors == divs);
    CHECK(g.narrow() == (disc > 0));
  }
  try {
    class_group(-12);
    FAIL("expected NotFundamental");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotFundamental);
  }
  try {
    class_group(-3299, 10);
    FAIL("expected CapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CapExceeded);
  }
}

TEST_CASE("class numbers match reduced-form counting") {
  for (i64 disc = -3; disc > -3000; --disc) {
    if (!is_fundamental_discriminant(disc)) continue;
    CHECK(class_group(disc).h() == brute_reduced_count(disc));
  }
}

TEST_CASE("ell-torsion by exponentiation") {
  for (i64 disc = -3; disc > -2000; --disc) {
    if (!is_fundamental_discriminant(disc)) continue;
    const FormClassGroup g(disc);
    const auto structure = class_group(disc);
    for (u64 ell : {2ull, 3ull, 5ull}) {
      u64 count = 0;
      for (std::size_t i = 0; i < g.order(); ++i) count += g.power(i, ell) == g.identity();
      CHECK(ell_torsion(structure, ell) == count);
      CHECK(structure.h() % count == 0);
    }
  }
  for (i64 disc : {229ll, 316ll, 1785ll, 3349ll}) {
    const FormClassGroup g(disc);
    u64 count = 0;
    for (std::size_t i = 0; i < g.order(); ++i) count += g.power(i, 3) == g.identity();
    CHECK(ell_torsion(class_group(disc), 3) == count);
  }
}

TEST_CASE("genus theory") {
  for (i64 disc = -2000; disc <= 2000; ++disc) {
    if (!is_fundamental_discriminant(disc)) continue;
    CHECK(genus_two_rank(disc) == omega(static_cast<u64>(std::llabs(disc))) - 1);
  }
}

TEST_CASE("quadratic fields") {
  CHECK(fundamental_discriminant(-1) == -4);
  CHECK(fundamental_discriminant(5) == 5);
  CHECK(fundamental_discriminant(3) == 12);
  CHECK(quadratic_field(-5).discriminant == -20);
  CHECK(quadratic_field(2).real);
  CHECK_THROWS_AS(fundamental_discriminant(1), Error);
  CHECK_THROWS_AS(fundamental_discriminant(12), Error);
}

TEST_CASE("pure cubic discriminants against the index-form oracle") {
  for (u64 d = 2; d <= 500; ++d) {
    if (!is_cubefree(d)) {
      try {
        pure_cubic_discriminant(d);
        FAIL("expected NotCubefree");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::NotCubefree);
      }
      continue;
    }
    const auto k = pure_cubic_discriminant(d);
    CHECK(k.a * k.b * k.b == d);
    CHECK(k.discriminant == index_form_discriminant(d));
    std::vector<u64> ramified;
    for (const auto& pp : factorize(3 * k.a * k.b)) ramified.push_back(pp.p);
    CHECK(k.ramified == ramified);
  }
  CHECK(pure_cubic_discriminant(2).discriminant == -108);
  CHECK(pure_cubic_discriminant(10).discriminant == -300);
  CHECK_THROWS_AS(pure_cubic_discriminant(1), Error);
}

TEST_CASE("nine to the omega bound") {
  CHECK(gerth_bound(2) == 9);
  CHECK(gerth_bound(6) == 81);
  CHECK(gerth_bound(30) == 729);
}

TEST_CASE("split prime counts") {
  const auto q = split_prime_count(SplitKind::Quadratic, -23, 50);
  for (u64 p : q.primes) CHECK(kronecker(-23, static_cast<i64>(p)) == 1);
  u64 expect = 0;
  for (u64 p = 2; p <= 50; ++p) expect += is_prime(p) && kronecker(-23, static_cast<i64>(p)) == 1;
  CHECK(q.count == expect);

  const auto c = split_prime_count(SplitKind::PureCubic, 2, 20);
  CHECK(c.count == 3);
  CHECK(c.primes == std::vector<u64>{5, 11, 17});

  const auto n = split_prime_count(SplitKind::NoncyclicCubic, -23, 60);
  for (u64 p : n.primes) CHECK(kronecker(-23, static_cast<i64>(p)) == -1);

  const auto chi = enumerate_characters(7, 3).front();
  const auto cyc = split_prime_count(chi, 200);
  for (u64 p : cyc.primes) CHECK(pow_mod(p, 2, 7) == 1);  // chi(p) = 1 exactly for cubes mod 7
  CHECK(split_prime_count(chi, 200, false).primes.empty());
}

TEST_CASE("squarefree-norm ideal counts against enumeration") {
  for (i64 disc = -50; disc <= 50; ++disc) {
    if (!is_fundamental_discriminant(disc)) continue;
    for (u64 x : {1ull, 2ull, 10ull, 37ull, 100ull}) {
      CHECK(squarefree_norm_ideal_count(disc, x) == brute_ideal_count(disc, x));
    }
    u64 split = 0;
    for (u64 p = 2; p <= 100; ++p) split += is_prime(p) && kronecker(disc, static_cast<i64>(p)) == 1;
    CHECK(squarefree_norm_ideal_count(disc, 100) >= 1 + 2 * split);
  }
  CHECK(squarefree_norm_ideal_count(-4, 10) == 3);
}

TEST_CASE("smooth discriminant families") {
  const auto fam = smooth_family(200, 0.5, Signature::Both);
  const std::vector<i64> head = {-4, -8, 8, 12, -24, 24, -40, 40, -56, 56, 60, -84};
  REQUIRE(fam.size() >= head.size());
  CHECK(std::vector<i64>(fam.begin(), fam.begin() + head.size()) == head);
  for (i64 d : fam) {
    CHECK(is_fundamental_discriminant(d));
    const u64 n = static_cast<u64>(std::llabs(d));
    CHECK(static_cast<double>(largest_prime_factor(n)) <= std::sqrt(static_cast<double>(n)) + 1e-9);
  }
  const auto imag = smooth_family(1000, 1.0, Signature::Imaginary, 10);
  CHECK(imag == std::vector<i64>{-3, -4, -7, -8, -11, -15, -19, -20, -23, -24});
  CHECK(parse_signature("real") == Signature::Real);
  CHECK_THROWS_AS(parse_signature("complex"), Error);
}
