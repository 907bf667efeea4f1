#pragma once

// Binary quadratic forms and their proper-equivalence class groups.
// Definite discriminants use the usual reduced forms; indefinite ones use
// cycles of reduced forms under the rho operator, which gives the narrow
// class group.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "torsion/arith.hpp"

namespace torsion {

struct BinaryQuadraticForm {
  i64 a = 1;
  i64 b = 0;
  i64 c = 1;

  i64 discriminant() const { return b * b - 4 * a * c; }
  BinaryQuadraticForm inverse() const { return {a, -b, c}; }
  std::string str() const;
  bool operator==(const BinaryQuadraticForm&) const = default;
};

/// The principal form (1, D mod 2, *) of discriminant D.
BinaryQuadraticForm principal_form(i64 disc);

/// Reduced positive-definite form: |b| <= a <= c, b >= 0 if |b| = a or a = c.
bool is_reduced_definite(const BinaryQuadraticForm& f);
/// Reduced indefinite form: 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b.
bool is_reduced_indefinite(const BinaryQuadraticForm& f);

/// Reduces a positive-definite form.
BinaryQuadraticForm reduce_definite(BinaryQuadraticForm f);
/// One step of the rho operator on an indefinite form.
BinaryQuadraticForm rho(const BinaryQuadraticForm& f);
/// Applies rho until the form is reduced.
BinaryQuadraticForm reduce_indefinite(BinaryQuadraticForm f);

/// Dirichlet composition of two primitive forms of the same discriminant
/// (not reduced).
BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g);

/// All reduced positive-definite primitive forms of discriminant D < 0, by a
/// direct (a, b, c) loop.
std::vector<BinaryQuadraticForm> enumerate_reduced_definite(i64 disc);

class FormClassGroup {
 public:
  /// D must be a non-square discriminant (D = 0 or 1 mod 4).
  explicit FormClassGroup(i64 disc);

  i64 discriminant() const { return disc_; }
  bool definite() const { return disc_ < 0; }
  std::size_t order() const { return reps_.size(); }
  /// One representative per class; index 0 is the identity.
  const std::vector<BinaryQuadraticForm>& elements() const { return reps_; }
  std::size_t identity() const { return 0; }

  std::size_t class_of(const BinaryQuadraticForm& f) const;
  std::size_t compose(std::size_t i, std::size_t j) const;
  std::size_t inverse(std::size_t i) const;
  std::size_t power(std::size_t i, u64 k) const;
  u64 element_order(std::size_t i) const;
  /// d_1 | d_2 | ... with product equal to the order (empty for the trivial group).
  std::vector<u64> elementary_divisors() const;

 private:
  struct FormHash {
    std::size_t operator()(const BinaryQuadraticForm& f) const noexcept {
      u64 h = static_cast<u64>(f.a) * 0x9E3779B97F4A7C15ull;
      h ^= static_cast<u64>(f.b) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
      h ^= static_cast<u64>(f.c) + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  i64 disc_;
  std::vector<BinaryQuadraticForm> reps_;
  std::unordered_map<BinaryQuadraticForm, std::size_t, FormHash> index_;  // reduced form -> class
};

}  // namespace torsion
