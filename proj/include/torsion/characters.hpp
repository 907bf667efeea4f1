#pragma once

// Dirichlet characters with exact values.
//
// A character mod q is stored through its CRT factorization: one local
// component per prime power p^e || q, each given by exponent indices with
// respect to fixed generators of (Z/p^e)^*.  Odd p^e use the smallest
// primitive root; 4 uses -1; 2^e with e >= 3 uses the pair (-1, 5).
// Values are exact roots of unity; conversion to floating point happens only
// where analytic code asks for it.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torsion/arith.hpp"

namespace torsion {

/// Either 0 or exp(2 pi i num/den) with 0 <= num < den, gcd(num, den) = 1.
class UnityValue {
 public:
  UnityValue() = default;  // zero
  static UnityValue zero() { return {}; }
  static UnityValue one() { return root(0, 1); }
  /// exp(2 pi i num/den), reduced.
  static UnityValue root(u64 num, u64 den);

  bool is_zero() const { return den_ == 0; }
  u64 numerator() const { return num_; }
  /// 0 for the zero value.
  u64 denominator() const { return den_; }

  UnityValue operator*(const UnityValue& o) const;
  UnityValue conj() const;
  UnityValue pow(u64 k) const;
  std::complex<double> to_complex() const;
  /// Real-valued characters only: -1, 0 or +1.  Throws for other values.
  int to_sign() const;
  std::string str() const;

  bool operator==(const UnityValue&) const = default;

 private:
  u64 num_ = 0;
  u64 den_ = 0;
};

/// Exact element of Z[zeta_m] stored as coefficients of x^k mod (x^m - 1).
/// Canonical comparisons reduce modulo the m-th cyclotomic polynomial.
class CyclotomicSum {
 public:
  explicit CyclotomicSum(u64 m = 1);

  u64 level() const { return m_; }
  /// Adds count * v; v must be zero or have denominator dividing level().
  void add(const UnityValue& v, i64 count = 1);
  void add_exponent(u64 k, i64 count = 1) { coeff_[k % m_] += count; }
  CyclotomicSum& operator+=(const CyclotomicSum& o);

  const std::vector<i64>& coefficients() const { return coeff_; }
  /// Coefficients reduced modulo Phi_m (length phi(m)); equal elements have
  /// equal reductions.
  std::vector<i64> reduced() const;
  bool is_zero() const;
  std::complex<double> to_complex() const;

 private:
  u64 m_;
  std::vector<i64> coeff_;
};

/// Integer coefficients of the m-th cyclotomic polynomial, low degree first.
const std::vector<i64>& cyclotomic_polynomial(u64 m);

/// Kronecker symbol (D | n).
int kronecker(i64 d, i64 n);

/// D is the discriminant of a quadratic field.
bool is_fundamental_discriminant(i64 d);

/// Discrete logarithm table for (Z/p^e)^* with respect to the fixed generators.
class LocalLogTable;

/// Exponent indices of one local component.  `b` is used only for 2^e, e >= 3,
/// where a indexes the -1 factor (mod 2) and b the 5 factor (mod 2^{e-2}).
struct LocalIndex {
  u64 a = 0;
  u64 b = 0;
  bool operator==(const LocalIndex&) const = default;
};

class DirichletCharacter {
 public:
  /// The principal character mod 1.
  DirichletCharacter();
  DirichletCharacter(u64 modulus, std::vector<LocalIndex> indices);

  /// Character number `index` in the deterministic enumeration order
  /// (mixed radix over components in increasing p; index 0 is principal).
  static DirichletCharacter from_index(u64 modulus, u64 index);
  static DirichletCharacter principal(u64 modulus);
  /// Recovers the local indices of a completely multiplicative q-periodic
  /// function by evaluating it at CRT lifts of the generators.
  static DirichletCharacter from_function(u64 modulus, const std::function<UnityValue(u64)>& values);

  u64 modulus() const { return modulus_; }
  u64 order() const { return order_; }
  u64 conductor() const { return conductor_; }
  /// True when chi(-1) = -1.
  bool is_odd() const { return odd_; }
  bool is_principal() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus_; }
  bool is_real() const { return order_ <= 2; }
  u64 index() const;
  const Factorization& factorization() const { return factors_; }
  const std::vector<LocalIndex>& local_indices() const { return indices_; }

  UnityValue operator()(i64 n) const;
  /// Exponent k with chi(n) = exp(2 pi i k / order()), or -1 when gcd(n,q) > 1.
  i64 exponent(i64 n) const;

  DirichletCharacter conj() const;
  DirichletCharacter operator*(const DirichletCharacter& o) const;
  /// The character mod `modulus` induced by this one (modulus must be a multiple).
  DirichletCharacter induce(u64 modulus) const;

  std::string str() const;
  bool operator==(const DirichletCharacter& o) const {
    return modulus_ == o.modulus_ && indices_ == o.indices_;
  }

 private:
  struct Component {
    u64 p;
    unsigned e;
    u64 pe;
    std::shared_ptr<const LocalLogTable> logs;
    // chi_p(g) exponent multipliers, scaled to the global order
    u64 mult_a;
    u64 mult_b;
  };

  void finalize();

  u64 modulus_ = 1;
  Factorization factors_;
  std::vector<LocalIndex> indices_;
  std::vector<Component> components_;
  u64 order_ = 1;
  u64 conductor_ = 1;
  bool odd_ = false;
};

/// Returns all phi(q) characters mod q in index order, optionally only those of
/// exact order `order_filter`.
std::vector<DirichletCharacter> enumerate_characters(u64 q, std::optional<u64> order_filter = std::nullopt);

/// Real primitive character attached to a fundamental discriminant.
DirichletCharacter attach_quadratic(i64 discriminant);

struct PrimitiveForm {
  DirichletCharacter character;
  u64 conductor;
};

PrimitiveForm primitivize(const DirichletCharacter& chi);

}  // namespace torsion
