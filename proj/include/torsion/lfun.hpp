#pragma once

// Dirichlet L-functions: evaluation through Hurwitz zeta decomposition,
// sup-norm measurement on rectangles, argument-principle zero scanning and
// zero-free disc certification near s = 1.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torsion/characters.hpp"
#include "torsion/hurwitz.hpp"

namespace torsion {

struct LEvaluation {
  cplx value;
  cplx derivative;
};

/// L(s, chi) for a fixed character.  Imprimitive characters are evaluated
/// through their primitive part times the missing Euler factors.
class LFunction {
 public:
  explicit LFunction(const DirichletCharacter& chi, double tol = 1e-12);

  const DirichletCharacter& character() const { return chi_; }
  double tolerance() const { return tol_; }
  /// Principal characters have a pole at s = 1.
  bool has_pole() const { return chi_.is_principal(); }

  /// L and L'.  Throws PoleAtOne for principal characters at s = 1.
  LEvaluation eval(cplx s) const;
  cplx operator()(cplx s) const { return eval(s).value; }
  /// (s - 1) L(s) for principal characters, L(s) otherwise: entire in s.
  LEvaluation entire(cplx s) const;

 private:
  struct EulerFactor {
    double log_p;
    cplx value;  // chi*(p)
  };

  LEvaluation primitive_part(cplx s, bool completed) const;
  LEvaluation euler_correction(cplx s) const;

  DirichletCharacter chi_;
  double tol_;
  u64 conductor_;
  std::vector<std::pair<double, cplx>> residues_;  // (a / f, chi*(a)) for chi*(a) != 0
  std::vector<EulerFactor> missing_;
};

cplx evaluate_L(const DirichletCharacter& chi, cplx s, double tol = 1e-12);
/// L'/L.  Throws NearZeroOrPole when |L(s)| is below the safety threshold.
cplx log_derivative(const DirichletCharacter& chi, cplx s, double tol = 1e-12);

struct Rectangle {
  double sigma_min = 0.0;
  double sigma_max = 1.0;
  double t_min = -1.0;
  double t_max = 1.0;

  double width() const { return sigma_max - sigma_min; }
  double height() const { return t_max - t_min; }
};

struct Zero {
  double beta = 0.0;
  double gamma = 0.0;
  double residual = 0.0;  // |L(beta + i gamma)| after refinement
};

struct SupNormReport {
  Rectangle region;
  double resolution = 0.0;
  std::size_t samples = 0;
  double max_abs = 0.0;
  cplx argmax;
  double phi = 0.0;  // log(max_abs)
};

/// Max of |L| on [1 - theta, 2] x [-t_max, t_max] by grid search with local
/// refinement.  Throws PoleInRegion for principal characters.
SupNormReport sup_norm(const DirichletCharacter& chi, double theta, double t_max, double resolution,
                       double tol = 1e-10);
SupNormReport sup_norm(const LFunction& lf, const Rectangle& region, double resolution);

struct ZeroScanReport {
  Rectangle region;
  double resolution = 0.0;
  int winding = 0;
  bool perturbed = false;
  std::vector<Zero> zeros;  // ordered by (gamma, beta)
  std::size_t evaluations = 0;
  /// Floating-point argument principle: counts are exact only up to zeros
  /// closer than `resolution` to each other or to the boundary.
  std::string caveat;
};

/// Counts zeros in the rectangle by the argument principle, subdividing until
/// each cell holds at most one zero, then refines each by Newton's method.
ZeroScanReport scan_zeros(const DirichletCharacter& chi, const Rectangle& region, double resolution,
                          double tol = 1e-12);
ZeroScanReport scan_zeros(const LFunction& lf, const Rectangle& region, double resolution);

/// Winding number of the entire form of L around the boundary of `region`.
int winding_number(const LFunction& lf, const Rectangle& region, double resolution);

enum class ZeroFreeVerdict { ZeroFree, OneRealZero, Violation };
std::string_view verdict_name(ZeroFreeVerdict v);

struct HypothesisFlags {
  bool phi_window = false;  // phi e^{-phi} <= theta <= 1 <= phi
  bool loglog = false;      // phi >= theta (1 + log log 3q)
  /// The bound is also needed for chi^2; for order-2 chi it is not applicable.
  bool chi_squared_applicable = true;
};

HypothesisFlags check_hypotheses(double theta, double phi, const DirichletCharacter& chi);

/// Smallest phi >= measured satisfying both hypothesis conditions for theta <= 1.
double admissible_phi(double measured_phi, double theta, u64 modulus);

struct CensusClassification {
  ZeroFreeVerdict verdict = ZeroFreeVerdict::ZeroFree;
  std::optional<Zero> exceptional;
  std::vector<std::string> violations;
};

/// Applies the zero-free-region taxonomy to zeros found in the disc region:
/// complex characters admit none, real characters at most one simple real zero.
CensusClassification classify_census(const LFunction& lf, std::span<const Zero> zeros, double resolution);

struct ZeroFreeCertificate {
  u64 modulus = 1;
  u64 index = 0;
  double theta = 0.0;
  double phi = 0.0;
  double c2 = 0.0;
  double radius = 0.0;  // C2 theta / phi
  double t_cap = 1.0;
  HypothesisFlags hypotheses;
  ZeroScanReport scan;
  CensusClassification census;
};

ZeroFreeCertificate certify_zero_free(const DirichletCharacter& chi, double theta, double phi, double c2,
                                      double t_cap = 1.0, double resolution = 1e-3, double tol = 1e-12);

struct ScanRegion {
  double sigma_min = 0.99;
  double sigma_max = 1.5;
  double t_cap = 1.0;

  bool zero_area() const { return !(sigma_min < sigma_max) || !(t_cap > 0.0); }
};

struct PairExclusionReport {
  bool vacuous = false;
  std::vector<Zero> zeros_first;
  std::vector<Zero> zeros_second;
  bool passed = true;
  /// log sup |L| on [1 - theta, 2] x [-3, 3] for chi1, chi2, chi1*chi2 when requested.
  std::optional<std::array<double, 3>> phi;
};

PairExclusionReport pair_exclusion(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                   const ScanRegion& region, double resolution = 1e-3,
                                   std::optional<double> hypothesis_theta = std::nullopt);

/// Truncated sum of Lambda(n) n^{-sigma0} (3 + 4 Re(chi(n) n^{-it}) + Re(chi^2(n) n^{-2it})).
double three_four_one_partial(const DirichletCharacter& chi, double sigma0, double t, u64 truncation);

}  // namespace torsion
