#include "torsion/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "torsion/error.hpp"
#include "torsion/parallel.hpp"

namespace torsion {

namespace {

double abs_disc(i64 disc) { return std::abs(static_cast<double>(disc)); }

std::optional<double> exponent_of(std::optional<u64> h_ell, i64 disc) {
  if (!h_ell) return std::nullopt;
  return std::log(static_cast<double>(*h_ell)) / std::log(abs_disc(disc));
}

u64 census_limit(double x) { return static_cast<u64>(std::floor(x)); }

}  // namespace

double ev_bound(i64 disc, double epsilon, u64 m) {
  if (m == 0) throw Error(Errc::ZeroCensus, "no primes or ideals in the census");
  return std::pow(abs_disc(disc), 0.5 + epsilon) / static_cast<double>(m);
}

std::vector<ExperimentRow> run_quadratic_experiment(std::span<const i64> family, const QuadraticExperiment& params,
                                                    ClassGroupCache* cache) {
  if (!is_prime(params.ell)) throw Error(Errc::InvalidArgument, "ell must be prime");
  const double limit = 1.0 / (2.0 * static_cast<double>(params.ell));
  if (!(params.varpi > 0.0 && params.varpi < limit)) {
    throw Error(Errc::ConstraintViolated,
                "varpi = " + format_real(params.varpi) + " must lie in (0, 1/(2 ell)) = (0, " + format_real(limit) + ")");
  }
  return parallel_map(family.size(), params.threads, [&](std::size_t i) {
    const i64 disc = family[i];
    const auto g = cache ? cache->get_or_compute(disc, params.class_group_cap) : class_group(disc, params.class_group_cap);
    ExperimentRow row;
    row.disc = disc;
    row.kind = disc < 0 ? "imaginary-quadratic" : "real-quadratic";
    row.h = g.h();
    row.h_ell = ell_torsion(g, params.ell);
    row.ell = params.ell;
    row.varpi = params.varpi;
    row.x = std::pow(abs_disc(disc), params.varpi);
    row.m = params.use_ideals ? squarefree_norm_ideal_count(disc, census_limit(row.x))
                              : split_prime_count(SplitKind::Quadratic, disc, census_limit(row.x), false).count;
    row.epsilon = params.epsilon;
    if (row.m > 0) row.ev_bound = ev_bound(disc, params.epsilon, row.m);
    row.empirical_exponent = exponent_of(row.h_ell, disc);
    row.predicted_exponent = 0.5 - 1.0 / (2.0 * static_cast<double>(params.ell)) + params.epsilon;
    row.narrow = g.narrow();
    return row;
  });
}

std::vector<ExperimentRow> run_pure_cubic_experiment(u64 d_lo, u64 d_hi, const PureCubicExperiment& params,
                                                     std::span<const IngestedClassRecord> ingested) {
  if (!is_prime(params.ell)) throw Error(Errc::InvalidArgument, "ell must be prime");
  const double limit = 1.0 / (4.0 * static_cast<double>(params.ell));
  if (!(params.varpi > 0.0 && params.varpi < limit)) {
    throw Error(Errc::ConstraintViolated,
                "varpi = " + format_real(params.varpi) + " must lie in (0, 1/(4 ell)) = (0, " + format_real(limit) + ")");
  }
  std::vector<u64> ds;
  for (u64 d = std::max<u64>(d_lo, 2); d <= d_hi; ++d) {
    if (is_cubefree(d)) ds.push_back(d);
  }
  return parallel_map(ds.size(), params.threads, [&](std::size_t i) {
    const auto field = pure_cubic_discriminant(ds[i]);
    ExperimentRow row;
    row.disc = field.discriminant;
    row.kind = "pure-cubic";
    row.d = field.d;
    row.ell = params.ell;
    row.varpi = params.varpi;
    row.x = std::pow(abs_disc(row.disc), params.varpi);
    row.m = split_prime_count(SplitKind::PureCubic, static_cast<i64>(field.d), census_limit(row.x), false).count;
    row.epsilon = params.epsilon;
    if (row.m > 0) row.ev_bound = ev_bound(row.disc, params.epsilon, row.m);
    for (const auto& rec : ingested) {
      if (rec.disc != row.disc) continue;
      row.h = rec.h;
      if (rec.structure) {
        row.h_ell = ell_torsion(ClassGroupStructure{rec.disc, *rec.structure, ClassGroupMethod::Ingested}, params.ell);
      } else if (rec.h % params.ell != 0) {
        row.h_ell = 1;
      }
      break;
    }
    row.empirical_exponent = exponent_of(row.h_ell, row.disc);
    row.predicted_exponent = 0.5 - 1.0 / (4.0 * static_cast<double>(params.ell)) + params.epsilon;
    row.gerth = gerth_bound(field.d);
    return row;
  });
}

HLGRCheck hlgr_parameter_check(unsigned k, double delta_smooth, u64 ell) {
  if (k == 0 || k > 60) throw Error(Errc::InvalidArgument, "k must lie in [1, 60]");
  if (!(delta_smooth >= 0.0)) throw Error(Errc::InvalidArgument, "delta must be nonnegative");
  if (!is_prime(ell)) throw Error(Errc::InvalidArgument, "ell must be prime");
  HLGRCheck c;
  c.k = k;
  c.delta = delta_smooth;
  c.ell = ell;
  const double kk = k;
  c.big_l = std::ldexp(1.0, static_cast<int>(k) + 3) - 2.0;
  c.theta = (kk + 3.0) / c.big_l;
  c.xi = (1.0 + delta_smooth * (kk * kk + 3.0 * kk + 4.0) / 4.0) / c.big_l;
  c.threshold = (2.0 * c.theta - c.theta * c.theta) / (4.0 * static_cast<double>(ell));
  c.pass = c.xi < c.threshold;
  return c;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_integer(const std::string& field, const char* what, std::size_t line_no) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (field.empty() || used != field.size()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad " + what + " '" + field + "'");
  }
  return static_cast<T>(v);
}

}  // namespace

std::vector<IngestedClassRecord> ingest_class_numbers(std::istream& in) {
  std::vector<IngestedClassRecord> out;
  std::set<i64> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!header) {
      if (line != "label,disc,h,structure") {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected header label,disc,h,structure");
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3 && f.size() != 4) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 3 or 4 fields");
    }
    IngestedClassRecord r;
    r.label = f[0];
    r.disc = parse_integer<i64>(f[1], "discriminant", line_no);
    if (r.disc == 0) throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": discriminant is zero");
    const i64 h = parse_integer<i64>(f[2], "class number", line_no);
    if (h < 1) throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": class number must be >= 1");
    r.h = static_cast<u64>(h);
    if (f.size() == 4 && !f[3].empty()) {
      std::vector<u64> divs;
      std::stringstream ss(f[3]);
      std::string part;
      u64 prod = 1;
      while (std::getline(ss, part, '.')) {
        const i64 d = parse_integer<i64>(part, "structure entry", line_no);
        if (d < 1) throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": structure entries must be >= 1");
        if (!divs.empty() && d % static_cast<i64>(divs.back()) != 0) {
          throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": structure is not a divisibility chain");
        }
        divs.push_back(static_cast<u64>(d));
        prod *= static_cast<u64>(d);
      }
      if (prod != r.h) {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": structure does not multiply to h");
      }
      r.structure = std::move(divs);
    }
    if (!seen.insert(r.disc).second) {
      throw Error(Errc::DuplicateDiscriminant,
                  "line " + std::to_string(line_no) + ": discriminant " + std::to_string(r.disc) + " repeated");
    }
    out.push_back(std::move(r));
  }
  if (!header) throw Error(Errc::ParseError, "line 1: missing header label,disc,h,structure");
  return out;
}

std::vector<IngestedClassRecord> ingest_class_numbers(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IOError, "cannot read " + path.string());
  return ingest_class_numbers(in);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string experiment_csv_header() {
  return "disc,kind,d,h,h_ell,ell,varpi,X,M,epsilon,ev_bound,empirical_exponent,predicted_exponent,gerth_bound,narrow";
}

void write_experiment_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  auto opt_u = [](const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string(); };
  auto opt_r = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << experiment_csv_header() << '\n';
  for (const auto& r : rows) {
    out << r.disc << ',' << r.kind << ',' << (r.d ? std::to_string(r.d) : std::string()) << ',' << opt_u(r.h) << ','
        << opt_u(r.h_ell) << ',' << r.ell << ',' << format_real(r.varpi) << ',' << format_real(r.x) << ',' << r.m << ','
        << format_real(r.epsilon) << ',' << opt_r(r.ev_bound) << ',' << opt_r(r.empirical_exponent) << ','
        << format_real(r.predicted_exponent) << ',' << opt_u(r.gerth) << ',' << (r.narrow ? "true" : "false") << '\n';
  }
}

}  // namespace torsion
