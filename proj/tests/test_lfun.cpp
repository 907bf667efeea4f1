#include <doctest.h>

#include <numbers>
#include <random>

#include "torsion/error.hpp"
#include "torsion/lfun.hpp"

using namespace torsion;
using std::numbers::pi;

namespace {

// sum_{n <= N} chi(n) n^{-2}; for non-principal chi the tail is at most 2q / N^2 by partial summation
cplx direct_at_two(const DirichletCharacter& chi, u64 terms) {
  const u64 q = chi.modulus();
  std::vector<cplx> values(q);
  for (u64 a = 0; a < q; ++a) values[a] = chi(static_cast<i64>(a)).to_complex();
  long double re = 0.0L, im = 0.0L;
  for (u64 n = terms; n >= 1; --n) {
    const long double w = 1.0L / (static_cast<long double>(n) * static_cast<long double>(n));
    re += w * values[n % q].real();
    im += w * values[n % q].imag();
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("classical values") {
  const auto zeta = DirichletCharacter::principal(1);
  CHECK(std::abs(evaluate_L(zeta, 2.0) - pi * pi / 6) < 1e-12);
  CHECK(std::abs(evaluate_L(zeta, 0.0) + 0.5) < 1e-10);
  CHECK(std::abs(evaluate_L(zeta, -0.5) - (-0.2078862249773545660)) < 1e-10);
  const auto chi4 = attach_quadratic(-4);
  CHECK(std::abs(evaluate_L(chi4, 1.0) - pi / 4) < 1e-12);
  CHECK(std::abs(evaluate_L(chi4, 2.0) - 0.915965594177219015) < 1e-12);
  // L(1, chi_{-3}) = pi / (3 sqrt 3)
  CHECK(std::abs(evaluate_L(attach_quadratic(-3), 1.0) - pi / (3 * std::sqrt(3.0))) < 1e-12);
  // L(1, chi_5) = 2 log(golden ratio) / sqrt 5
  CHECK(std::abs(evaluate_L(attach_quadratic(5), 1.0) - 2 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0)) <
        1e-12);
  CHECK(std::abs(log_derivative(zeta, 2.0) - (-0.5699609930945328)) < 1e-12);
}

TEST_CASE("evaluation domain and pole") {
  const auto zeta = DirichletCharacter::principal(1);
  CHECK(code_of([&] { evaluate_L(zeta, 1.0); }) == Errc::PoleAtOne);
  CHECK(code_of([&] { evaluate_L(zeta, cplx(-1.5, 0.0)); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { log_derivative(zeta, cplx(0.5, 14.134725141734693)); }) == Errc::NearZeroOrPole);
  // the entire form is finite at s = 1 with value the residue 1
  const auto e = LFunction(zeta).entire(1.0);
  CHECK(std::abs(e.value - 1.0) < 1e-12);
}

TEST_CASE("value at 2 against the Dirichlet series") {
  std::mt19937_64 rng(2024);
  const double tol = 1e-10;
  const u64 terms = 1000000;
  int checked = 0;
  while (checked < 50) {
    const u64 q = 3 + rng() % 98;
    const u64 idx = 1 + rng() % (euler_phi(q) - 1);
    const auto chi = DirichletCharacter::from_index(q, idx);
    const double tail = 2.0 * static_cast<double>(q) / (static_cast<double>(terms) * terms);
    const cplx direct = direct_at_two(chi, terms);
    CHECK(std::abs(evaluate_L(chi, 2.0, tol) - direct) <= 10 * tol + tail);
    ++checked;
  }
  // principal characters: zeta(2) prod (1 - p^{-2})
  for (u64 q : {6ull, 10ull, 30ull, 97ull}) {
    double expect = pi * pi / 6;
    for (const auto& pp : factorize(q)) expect *= 1.0 - 1.0 / static_cast<double>(pp.p * pp.p);
    CHECK(std::abs(evaluate_L(DirichletCharacter::principal(q), 2.0) - expect) < 1e-12);
  }
}

TEST_CASE("conjugation symmetry") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> sig(-0.5, 2.5), ht(-20.0, 20.0);
  const double tol = 1e-12;
  for (int i = 0; i < 60; ++i) {
    const u64 q = 3 + rng() % 60;
    const auto chi = DirichletCharacter::from_index(q, 1 + rng() % (euler_phi(q) - 1));
    const cplx s(sig(rng), ht(rng));
    const cplx a = evaluate_L(chi, s, tol);
    const cplx b = evaluate_L(chi.conj(), std::conj(s), tol);
    CHECK(std::abs(b - std::conj(a)) <= 10 * tol * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("imprimitive characters differ from primitive by Euler factors") {
  const cplx pts[] = {{0.5, 3.0}, {2.5, -1.0}, {-0.3, 7.5}};
  for (u64 q = 2; q <= 60; ++q) {
    for (const auto& chi : enumerate_characters(q)) {
      if (chi.is_primitive()) continue;
      const auto prim = primitivize(chi);
      for (const cplx s : pts) {
        cplx expect = evaluate_L(prim.character, s);
        for (const auto& pp : chi.factorization()) {
          const auto v = prim.character(static_cast<i64>(pp.p));
          if (!v.is_zero()) expect *= 1.0 - v.to_complex() * std::pow(static_cast<double>(pp.p), -s);
        }
        CHECK(std::abs(evaluate_L(chi, s) - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
      }
    }
  }
}

TEST_CASE("derivative against central differences") {
  const auto chi = DirichletCharacter::from_index(11, 3);
  const LFunction lf(chi);
  for (const cplx s : {cplx(0.7, 2.0), cplx(1.2, -5.0), cplx(3.0, 0.5)}) {
    const double h = 1e-5;
    const cplx fd = (lf(s + h) - lf(s - h)) / (2 * h);
    CHECK(std::abs(lf.eval(s).derivative - fd) < 1e-7);
  }
}

TEST_CASE("zeta zeros on the critical strip up to height 30") {
  const auto zeta = DirichletCharacter::principal(1);
  const auto fine = scan_zeros(zeta, {0.0, 1.0, 0.5, 30.0}, 1e-3);
  const auto coarse = scan_zeros(zeta, {0.0, 1.0, 0.5, 30.0}, 2e-3);
  REQUIRE(fine.zeros.size() == 3);
  REQUIRE(coarse.zeros.size() == 3);
  CHECK(fine.winding == 3);
  const double known[] = {14.134725141734693, 21.022039638771555, 25.010857580145689};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(fine.zeros[i].beta - 0.5) < 1e-6);
    CHECK(std::abs(fine.zeros[i].gamma - known[i]) < 1e-6);
    CHECK(std::abs(fine.zeros[i].gamma - coarse.zeros[i].gamma) < 1e-8);
  }
  CHECK_FALSE(fine.caveat.empty());
}

TEST_CASE("first zero of L(s, chi_{-4})") {
  const auto r = scan_zeros(attach_quadratic(-4), {0.2, 0.8, 5.0, 7.0}, 1e-2);
  REQUIRE(r.zeros.size() == 1);
  CHECK(std::abs(r.zeros[0].gamma - 6.020948904697597) < 1e-8);
  CHECK(std::abs(r.zeros[0].beta - 0.5) < 1e-8);
}

TEST_CASE("scan errors") {
  const auto chi = attach_quadratic(-4);
  CHECK(code_of([&] { scan_zeros(chi, {0.5, 0.5, 0.0, 1.0}, 1e-2); }) == Errc::DegenerateRegion);
  // the pole is removed through (s - 1) zeta(s)
  CHECK(scan_zeros(DirichletCharacter::principal(1), {0.5, 1.5, -1.0, 1.0}, 1e-2).zeros.empty());
  CHECK(winding_number(LFunction(chi), {0.6, 1.2, -1.0, 1.0}, 1e-2) == 0);
}

TEST_CASE("sup norm") {
  const auto chi = attach_quadratic(-4);
  const auto r = sup_norm(chi, -0.5, 1.0, 0.02);
  CHECK(r.max_abs <= 2.6123753486854883);  // zeta(3/2)
  CHECK(r.max_abs >= std::abs(evaluate_L(chi, cplx(1.5, 0.0))));
  CHECK(r.phi == doctest::Approx(std::log(r.max_abs)));
  CHECK_THROWS_AS(sup_norm(DirichletCharacter::principal(1), 0.1, 1.0, 0.05), Error);
}

TEST_CASE("hypotheses and admissible phi") {
  const auto chi = attach_quadratic(-4);
  for (double measured : {0.1, 0.3, 1.0, 5.0}) {
    const double phi = admissible_phi(measured, 0.1, 4);
    CHECK(phi >= measured);
    const auto h = check_hypotheses(0.1, phi, chi);
    CHECK(h.phi_window);
    CHECK(h.loglog);
  }
  CHECK_FALSE(check_hypotheses(0.1, 0.5, chi).phi_window);
  CHECK_FALSE(check_hypotheses(0.1, 5.0, chi).chi_squared_applicable);
  CHECK(check_hypotheses(0.1, 5.0, DirichletCharacter::from_index(7, 1)).chi_squared_applicable);
}

TEST_CASE("census taxonomy") {
  const auto cubic = enumerate_characters(7, 3).front();
  const Zero fake{0.999, 0.0, 0.0};
  CHECK(classify_census(LFunction(cubic), std::vector<Zero>{fake}, 1e-3).verdict == ZeroFreeVerdict::Violation);

  // L(s, chi_5) has a simple trivial zero at s = 0
  const LFunction real(attach_quadratic(5));
  const Zero trivial{0.0, 0.0, 0.0};
  const auto one = classify_census(real, std::vector<Zero>{trivial}, 1e-3);
  CHECK(one.verdict == ZeroFreeVerdict::OneRealZero);
  REQUIRE(one.exceptional);
  CHECK(one.exceptional->beta == 0.0);
  CHECK(classify_census(real, std::vector<Zero>{trivial, trivial}, 1e-3).verdict == ZeroFreeVerdict::Violation);
  CHECK(classify_census(real, std::vector<Zero>{{0.9, 0.2, 0.0}}, 1e-3).verdict == ZeroFreeVerdict::Violation);
  // a point that is not a zero fails the simplicity probe
  CHECK(classify_census(real, std::vector<Zero>{{0.9, 0.0, 0.0}}, 1e-3).verdict == ZeroFreeVerdict::Violation);
  CHECK(classify_census(real, {}, 1e-3).verdict == ZeroFreeVerdict::ZeroFree);
  CHECK(verdict_name(ZeroFreeVerdict::OneRealZero) == "one-real-zero");
}

TEST_CASE("zero-free certificate") {
  const auto chi = attach_quadratic(-4);
  const auto cert = certify_zero_free(chi, 0.1, 3.6, 0.05);
  CHECK(cert.radius == doctest::Approx(0.05 * 0.1 / 3.6));
  CHECK(cert.census.verdict == ZeroFreeVerdict::ZeroFree);
  CHECK(cert.scan.zeros.empty());
  CHECK(cert.hypotheses.phi_window);
}

TEST_CASE("pair exclusion") {
  const auto a = attach_quadratic(-3).induce(12);
  const auto b = attach_quadratic(-4).induce(12);
  const auto r = pair_exclusion(a, b, ScanRegion{});
  CHECK(r.passed);
  CHECK_FALSE(r.vacuous);
  CHECK(pair_exclusion(a, b, ScanRegion{1.2, 1.1, 1.0}).vacuous);
  CHECK_THROWS_AS(pair_exclusion(a, attach_quadratic(-4), ScanRegion{}), Error);
  CHECK_THROWS_AS(pair_exclusion(a, a, ScanRegion{}), Error);
  CHECK_THROWS_AS(pair_exclusion(a, enumerate_characters(7, 3).front().induce(12 * 7), ScanRegion{}), Error);
}

TEST_CASE("three-four-one combination is nonnegative") {
  std::mt19937_64 rng(341);
  std::uniform_real_distribution<double> sig(1.0, 1.5), ht(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const u64 q = 1 + rng() % 100;
    const auto chi = DirichletCharacter::from_index(q, rng() % euler_phi(q));
    double s0 = sig(rng);
    if (s0 == 1.0) s0 = 1.25;
    CHECK(three_four_one_partial(chi, s0, ht(rng), 1 + rng() % 10000) >= 0.0);
  }
}
