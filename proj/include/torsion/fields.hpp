#pragma once

// Field-side invariants: discriminants, form class groups and their torsion,
// split-prime and ideal counts, and smooth discriminant families.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torsion/arith.hpp"
#include "torsion/characters.hpp"
#include "torsion/forms.hpp"

namespace torsion {

/// d if d = 1 mod 4, else 4d.  Requires d squarefree, d != 0, 1.
i64 fundamental_discriminant(i64 d);

struct QuadraticField {
  i64 d = -1;
  i64 discriminant = -4;
  bool real = false;
  DirichletCharacter character;
};

QuadraticField quadratic_field(i64 d);

struct PureCubicField {
  u64 d = 2;
  u64 a = 2;  // squarefree, d = a b^2
  u64 b = 1;
  i64 discriminant = -108;
  std::vector<u64> ramified;
};

/// Throws NotCubefree, or InvalidArgument for d <= 1.
PureCubicField pure_cubic_discriminant(u64 d);

enum class ClassGroupMethod { DefiniteReduction, IndefiniteCycles, Ingested };
std::string_view method_name(ClassGroupMethod m);
ClassGroupMethod parse_method(std::string_view s);

struct ClassGroupStructure {
  i64 discriminant = 0;
  std::vector<u64> divisors;  // d_1 | d_2 | ...
  ClassGroupMethod method = ClassGroupMethod::DefiniteReduction;

  u64 h() const;
  /// Positive discriminants give the narrow class group.
  bool narrow() const { return discriminant > 0; }
};

inline constexpr u64 kDefaultClassGroupCap = 10'000'000;

/// Throws NotFundamental, or CapExceeded when |disc| > cap.
ClassGroupStructure class_group(i64 disc, u64 cap = kDefaultClassGroupCap);

/// prod gcd(ell, d_i).  Requires ell prime.
u64 ell_torsion(const ClassGroupStructure& g, u64 ell);

/// 2-rank of the form class group.
unsigned genus_two_rank(i64 disc, u64 cap = kDefaultClassGroupCap);

/// 9^{omega(d)}, for d > 1.
u64 gerth_bound(u64 d);

enum class SplitKind { Quadratic, PureCubic, NoncyclicCubic, CyclicCubic };
std::string_view split_kind_name(SplitKind k);

struct SplitCount {
  u64 count = 0;
  std::vector<u64> primes;
};

/// Quadratic: chi_D(p) = +1.  Pure cubic (parameter d): p = 2 mod 3 and p
/// unramified.  Noncyclic cubic (parameter D): (D | p) = -1.
SplitCount split_prime_count(SplitKind kind, i64 parameter, u64 x, bool keep_primes = true);
/// Cyclic cubic given by its character: chi(p) = 1.
SplitCount split_prime_count(const DirichletCharacter& chi, u64 x, bool keep_primes = true);

/// sum_{n <= X} a(n), the number of ideals of squarefree norm coprime to D
/// (including the unit ideal).
u64 squarefree_norm_ideal_count(i64 disc, u64 x);

enum class Signature { Imaginary, Real, Both };
Signature parse_signature(std::string_view s);

/// Fundamental discriminants with |D| <= max_abs and P(|D|) <= |D|^{smooth_exponent},
/// ascending by |D| with the negative one first.
std::vector<i64> smooth_family(u64 max_abs, double smooth_exponent, Signature sig,
                               std::optional<std::size_t> count_cap = std::nullopt);

}  // namespace torsion
