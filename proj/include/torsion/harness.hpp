#pragma once

// Torsion-bound experiments over families of fields, parameter checks,
// ingestion of externally computed class numbers and CSV emission.

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "torsion/arith.hpp"
#include "torsion/cache.hpp"
#include "torsion/fields.hpp"

namespace torsion {

/// |D|^{1/2 + eps} / M.  Throws ZeroCensus when M = 0.
double ev_bound(i64 disc, double epsilon, u64 m);

struct ExperimentRow {
  i64 disc = 0;
  std::string kind;  // imaginary-quadratic | real-quadratic | pure-cubic
  u64 d = 0;         // pure cubic radicand, 0 otherwise
  std::optional<u64> h;
  std::optional<u64> h_ell;
  u64 ell = 3;
  double varpi = 0.0;
  double x = 0.0;  // |D|^varpi
  u64 m = 0;
  double epsilon = 0.1;
  std::optional<double> ev_bound;  // present when m > 0
  std::optional<double> empirical_exponent;
  double predicted_exponent = 0.0;
  std::optional<u64> gerth;
  bool narrow = false;

  bool operator==(const ExperimentRow&) const = default;
};

struct QuadraticExperiment {
  u64 ell = 3;
  double varpi = 0.15;
  double epsilon = 0.1;
  bool use_ideals = false;
  unsigned threads = 1;
  u64 class_group_cap = kDefaultClassGroupCap;
};

/// Throws ConstraintViolated unless 0 < varpi < 1/(2 ell).
std::vector<ExperimentRow> run_quadratic_experiment(std::span<const i64> family, const QuadraticExperiment& params,
                                                    ClassGroupCache* cache = nullptr);

struct IngestedClassRecord {
  std::string label;
  i64 disc = 0;
  u64 h = 1;
  std::optional<std::vector<u64>> structure;
};

struct PureCubicExperiment {
  u64 ell = 3;
  double varpi = 0.05;
  double epsilon = 0.1;
  unsigned threads = 1;
};

/// Rows for each cube-free d in [d_lo, d_hi].  Throws ConstraintViolated
/// unless 0 < varpi < 1/(4 ell).
std::vector<ExperimentRow> run_pure_cubic_experiment(u64 d_lo, u64 d_hi, const PureCubicExperiment& params,
                                                     std::span<const IngestedClassRecord> ingested = {});

struct HLGRCheck {
  unsigned k = 15;
  double delta = 0.0;
  u64 ell = 5;
  double big_l = 0.0;  // 2^{k+3} - 2
  double theta = 0.0;
  double xi = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// theta = (k+3)/L, xi = (1 + delta (k^2+3k+4)/4)/L, pass iff xi < (2 theta - theta^2)/(4 ell).
HLGRCheck hlgr_parameter_check(unsigned k, double delta_smooth, u64 ell);

/// CSV with header `label,disc,h,structure`.  Throws ParseError (with line
/// number) or DuplicateDiscriminant.
std::vector<IngestedClassRecord> ingest_class_numbers(std::istream& in);
std::vector<IngestedClassRecord> ingest_class_numbers(const std::filesystem::path& path);

/// %.12g formatting used for every CSV float.
std::string format_real(double v);

std::string experiment_csv_header();
void write_experiment_csv(std::ostream& out, std::span<const ExperimentRow> rows);

}  // namespace torsion
