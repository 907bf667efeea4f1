#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "torsion/cache.hpp"
#include "torsion/characters.hpp"
#include "torsion/charsums.hpp"
#include "torsion/cli.hpp"
#include "torsion/error.hpp"
#include "torsion/fields.hpp"
#include "torsion/harness.hpp"
#include "torsion/kernels.hpp"
#include "torsion/lfun.hpp"

namespace torsion::cli {

namespace {

using json = nlohmann::ordered_json;

double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) return Rational::parse(text).to_double();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) throw Error(Errc::InvalidArgument, "not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_real(part));
  return out;
}

cplx parse_complex(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw Error(Errc::InvalidArgument, "expected re or re,im: '" + text + "'");
}

Rectangle parse_rect(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 4) throw Error(Errc::InvalidArgument, "expected sigma1,sigma2,t1,t2: '" + text + "'");
  return {v[0], v[1], v[2], v[3]};
}

json character_json(const DirichletCharacter& chi) {
  json j;
  j["modulus"] = chi.modulus();
  j["index"] = chi.index();
  j["order"] = chi.order();
  j["conductor"] = chi.conductor();
  j["primitive"] = chi.is_primitive();
  j["odd"] = chi.is_odd();
  j["real"] = chi.is_real();
  return j;
}

json zero_json(const Zero& z) {
  json j;
  j["beta"] = z.beta;
  j["gamma"] = z.gamma;
  j["residual"] = z.residual;
  return j;
}

std::vector<i64> read_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IOError, "cannot read family file " + path);
  std::vector<i64> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(Errc::ParseError, path + " line " + std::to_string(no) + ": bad discriminant '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<i64> smallest_imaginary(std::size_t count) {
  for (u64 bound = 4 * count + 64;; bound *= 2) {
    auto fam = smooth_family(bound, 1.0, Signature::Imaginary, count);
    if (fam.size() >= count) return fam;
  }
}

struct Options {
  // globals
  std::string config_path, format, cache, out;
  unsigned threads = 0;
  // shared selectors
  u64 modulus = 1, index = 0, index2 = 1;
  i64 disc = 0;
  std::string order_filter;
  // numeric parameters
  i64 n = 1;
  u64 start = 1, length = 1, k = 1, x = 0, d = 2, d_min = 2, d_max = 100, count = 0, max_abs = 1000, ell = 3;
  std::string s = "2", rect, tol, y, log_y, delta, theta, phi, c2, t_max = "3", t_cap = "1", resolution, height = "0",
              cap, sigma_min = "0.99", sigma_max = "1.5", xi, vartheta = "1", varpi, epsilon = "0.1", kind, param,
              signature = "both", smooth = "1", family_file, ingest, extra_zero, check_theta;
  bool ideals = false;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  std::function<void(Emitter&, const Config&)> action;
  int exit_override = 0;

  CLI::App app{"Numerical probes for class group torsion, Dirichlet characters and L-functions", "torsion_probe"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  app.add_option("--config", o.config_path, "JSON config file");
  app.add_option("--format", o.format, "Output format: csv or jsonl");
  app.add_option("--threads", o.threads, "Worker threads");
  app.add_option("--cache", o.cache, "Class group cache file (JSONL)");
  app.add_option("--out", o.out, "Write the report to this file instead of stdout");

  auto character = [&](CLI::App* sub) {
    sub->add_option("--modulus,-q", o.modulus, "Modulus q")->check(CLI::PositiveNumber);
    sub->add_option("--index,-i", o.index, "Character index in enumeration order (0 = principal)");
  };
  auto pick = [&]() { return DirichletCharacter::from_index(o.modulus, o.index); };
  auto cfg_tol = [&](const Config& cfg) { return o.tol.empty() ? cfg.l_tol : parse_real(o.tol); };
  auto cfg_res = [&](const Config& cfg) { return o.resolution.empty() ? cfg.scan_resolution : parse_real(o.resolution); };

  // ---- char
  auto* chr = app.add_subcommand("char", "Dirichlet characters");
  chr->require_subcommand(1);
  {
    auto* sub = chr->add_subcommand("info", "Order, conductor and parity of a character");
    character(sub);
    sub->callback([&] { action = [&](Emitter& em, const Config&) { em.record(character_json(pick())); }; });

    sub = chr->add_subcommand("eval", "chi(n) as an exact root of unity");
    character(sub);
    sub->add_option("--n", o.n, "Argument n")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto chi = pick();
        const auto v = chi(o.n);
        const auto c = v.to_complex();
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["n"] = o.n;
        j["value"] = v.str();
        j["re"] = c.real();
        j["im"] = c.imag();
        em.record(j);
      };
    });

    sub = chr->add_subcommand("list", "All characters modulo q");
    sub->add_option("--modulus,-q", o.modulus, "Modulus q")->required()->check(CLI::PositiveNumber);
    sub->add_option("--order", o.order_filter, "Only characters of this exact order");
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        std::optional<u64> filter;
        if (!o.order_filter.empty()) filter = static_cast<u64>(parse_real(o.order_filter));
        for (const auto& chi : enumerate_characters(o.modulus, filter)) em.record(character_json(chi));
      };
    });

    sub = chr->add_subcommand("attach", "Real primitive character of a fundamental discriminant");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        auto j = character_json(attach_quadratic(o.disc));
        j["disc"] = o.disc;
        em.record(j);
      };
    });
  }

  // ---- charsum
  auto* cs = app.add_subcommand("charsum", "Incomplete character sums and the smooth-modulus bound");
  cs->require_subcommand(1);
  {
    auto range = [&](CLI::App* sub) {
      sub->add_option("--start,-M", o.start, "Start M (sum over M < n <= M + N)")->required();
      sub->add_option("--length,-N", o.length, "Length N")->required();
    };
    auto* sub = cs->add_subcommand("sum", "Exact partial sum");
    character(sub);
    range(sub);
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto chi = pick();
        const auto v = partial_sum(chi, o.start, o.length);
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["start"] = o.start;
        j["length"] = o.length;
        j["re"] = v.real();
        j["im"] = v.imag();
        j["abs"] = std::abs(v);
        em.record(j);
      };
    });

    sub = cs->add_subcommand("bound", "Bound with implied constant 1 (optimal k when --k is omitted)");
    sub->add_option("--modulus,-q", o.modulus, "Modulus q")->required();
    range(sub);
    auto* kopt = sub->add_option("--k", o.k, "Differencing depth k >= 1");
    sub->callback([&, kopt] {
      action = [&, kopt](Emitter& em, const Config&) {
        const unsigned kk = kopt->count() ? static_cast<unsigned>(o.k) : gr_optimal_k(o.modulus, o.start, o.length);
        const auto p = GRBoundParams::make(o.modulus, o.start, o.length, kk);
        json j;
        j["modulus"] = o.modulus;
        j["start"] = o.start;
        j["length"] = o.length;
        j["k"] = kk;
        j["L"] = p.big_l();
        j["largest_prime"] = p.profile.largest_prime;
        j["squarefull"] = p.profile.squarefull;
        j["divisor_count"] = p.profile.divisor_count;
        j["sigma_minus_one"] = p.profile.sigma_minus_one.str();
        j["bound"] = gr_bound(p);
        em.record(j);
      };
    });

    sub = cs->add_subcommand("compare", "Exact |sum| against the bound");
    character(sub);
    range(sub);
    sub->add_option("--k", o.k, "Differencing depth k >= 1");
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto chi = pick();
        const auto c = compare_sum(CharacterSumTable(chi), o.start, o.length, static_cast<unsigned>(o.k));
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["start"] = o.start;
        j["length"] = o.length;
        j["k"] = o.k;
        j["abs"] = c.abs;
        j["bound"] = c.bound;
        j["ratio"] = c.ratio;
        em.record(j);
      };
    });

    sub = cs->add_subcommand("pv", "sqrt(q) log q for a primitive character");
    character(sub);
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto chi = pick();
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["bound"] = polya_vinogradov(chi);
        em.record(j);
      };
    });
  }

  // ---- lfun
  auto* lf = app.add_subcommand("lfun", "Dirichlet L-functions");
  lf->require_subcommand(1);
  {
    auto* sub = lf->add_subcommand("eval", "L(s, chi) and L'(s, chi)");
    character(sub);
    sub->add_option("--s", o.s, "Point re[,im]");
    sub->add_option("--tol", o.tol, "Target tolerance");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto chi = pick();
        const cplx s = parse_complex(o.s);
        if (!(s.real() > -1.0)) throw Error(Errc::InvalidArgument, "evaluation needs Re(s) > -1");
        const auto v = LFunction(chi, cfg_tol(cfg)).eval(s);
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["s_re"] = s.real();
        j["s_im"] = s.imag();
        j["re"] = v.value.real();
        j["im"] = v.value.imag();
        j["abs"] = std::abs(v.value);
        j["d_re"] = v.derivative.real();
        j["d_im"] = v.derivative.imag();
        j["em_direct_terms"] = hurwitz_direct_terms(s);
        em.record(j);
      };
    });

    sub = lf->add_subcommand("logderiv", "L'/L at s");
    character(sub);
    sub->add_option("--s", o.s, "Point re[,im]");
    sub->add_option("--tol", o.tol, "Target tolerance");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto chi = pick();
        const cplx s = parse_complex(o.s);
        const cplx v = log_derivative(chi, s, cfg_tol(cfg));
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["s_re"] = s.real();
        j["s_im"] = s.imag();
        j["re"] = v.real();
        j["im"] = v.imag();
        em.record(j);
      };
    });

    sub = lf->add_subcommand("supnorm", "max |L| on [1 - theta, 2] x [-t_max, t_max]");
    character(sub);
    sub->add_option("--theta", o.theta, "theta (default from config)");
    sub->add_option("--t-max", o.t_max, "Height t_max");
    sub->add_option("--resolution", o.resolution, "Grid spacing (default 0.02)");
    sub->add_option("--tol", o.tol, "Evaluation tolerance");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto chi = pick();
        const double th = o.theta.empty() ? cfg.theta : parse_real(o.theta);
        const double res = o.resolution.empty() ? 0.02 : parse_real(o.resolution);
        const auto r = sup_norm(chi, th, parse_real(o.t_max), res, std::max(cfg_tol(cfg), 1e-12));
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["sigma_min"] = r.region.sigma_min;
        j["t_max"] = r.region.t_max;
        j["resolution"] = r.resolution;
        j["samples"] = r.samples;
        j["max_abs"] = r.max_abs;
        j["argmax_re"] = r.argmax.real();
        j["argmax_im"] = r.argmax.imag();
        j["phi"] = r.phi;
        em.record(j);
      };
    });

    sub = lf->add_subcommand("scan", "Zeros in a rectangle by the argument principle");
    character(sub);
    sub->add_option("--rect", o.rect, "sigma1,sigma2,t1,t2")->required();
    sub->add_option("--resolution", o.resolution, "Scan resolution");
    sub->add_option("--tol", o.tol, "Evaluation tolerance");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto chi = pick();
        const auto r = scan_zeros(chi, parse_rect(o.rect), cfg_res(cfg), cfg_tol(cfg));
        em.note("region " + format_real(r.region.sigma_min) + "," + format_real(r.region.sigma_max) + "," +
                format_real(r.region.t_min) + "," + format_real(r.region.t_max) + (r.perturbed ? " (perturbed)" : ""));
        em.note("winding " + std::to_string(r.winding) + ", evaluations " + std::to_string(r.evaluations));
        em.note("caveat: " + r.caveat);
        if (r.zeros.empty()) em.finish();
        for (const auto& z : r.zeros) em.record(zero_json(z));
      };
    });

    sub = lf->add_subcommand("certify", "Zero-free disc certification near s = 1");
    character(sub);
    sub->add_option("--theta", o.theta, "theta (default from config)");
    sub->add_option("--phi", o.phi, "phi; measured and made admissible when omitted");
    sub->add_option("--c2", o.c2, "Constant C2 (default from config)");
    sub->add_option("--t-cap", o.t_cap, "Height cap");
    sub->add_option("--resolution", o.resolution, "Scan resolution");
    sub->add_option("--extra-zero", o.extra_zero, "Add re,im to the census before classification");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto chi = pick();
        const double th = o.theta.empty() ? cfg.theta : parse_real(o.theta);
        const double c2 = o.c2.empty() ? cfg.c2 : parse_real(o.c2);
        std::optional<double> measured;
        double phi;
        if (o.phi.empty()) {
          measured = sup_norm(chi, th, 3.0, 0.02).phi;
          phi = admissible_phi(*measured, th, chi.modulus());
        } else {
          phi = parse_real(o.phi);
        }
        auto cert = certify_zero_free(chi, th, phi, c2, parse_real(o.t_cap), cfg_res(cfg), cfg.l_tol);
        if (!o.extra_zero.empty()) {
          const cplx z = parse_complex(o.extra_zero);
          cert.scan.zeros.push_back({z.real(), z.imag(), 0.0});
          cert.census = classify_census(LFunction(chi, cfg.l_tol), cert.scan.zeros, cert.scan.resolution);
        }
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["order"] = chi.order();
        j["theta"] = th;
        j["phi_measured"] = measured ? json(*measured) : json(nullptr);
        j["phi"] = phi;
        j["c2"] = c2;
        j["radius"] = cert.radius;
        j["t_cap"] = cert.t_cap;
        j["phi_window"] = cert.hypotheses.phi_window;
        j["loglog"] = cert.hypotheses.loglog;
        j["chi_squared_hypothesis"] = cert.hypotheses.chi_squared_applicable ? "required" : "not-applicable";
        j["verdict"] = std::string(verdict_name(cert.census.verdict));
        j["exceptional_beta"] = cert.census.exceptional ? json(cert.census.exceptional->beta) : json(nullptr);
        j["zeros"] = cert.scan.zeros.size();
        j["violations"] = cert.census.violations;
        j["caveat"] = cert.scan.caveat;
        em.record(j);
        if (cert.census.verdict == ZeroFreeVerdict::Violation) exit_override = 2;
      };
    });

    sub = lf->add_subcommand("exclude", "Two real characters cannot both vanish near 1");
    sub->add_option("--modulus,-q", o.modulus, "Modulus q")->required();
    sub->add_option("--index", o.index, "First character index")->required();
    sub->add_option("--index2", o.index2, "Second character index")->required();
    sub->add_option("--sigma-min", o.sigma_min, "Left edge of the region");
    sub->add_option("--sigma-max", o.sigma_max, "Right edge of the region");
    sub->add_option("--t-cap", o.t_cap, "Height cap");
    sub->add_option("--resolution", o.resolution, "Scan resolution");
    sub->add_option("--check-theta", o.check_theta, "Also measure phi for chi1, chi2, chi1 chi2 at this theta");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto c1 = DirichletCharacter::from_index(o.modulus, o.index);
        const auto c2 = DirichletCharacter::from_index(o.modulus, o.index2);
        std::optional<double> th;
        if (!o.check_theta.empty()) th = parse_real(o.check_theta);
        const ScanRegion region{parse_real(o.sigma_min), parse_real(o.sigma_max), parse_real(o.t_cap)};
        const auto r = pair_exclusion(c1, c2, region, cfg_res(cfg), th);
        json j;
        j["modulus"] = o.modulus;
        j["index"] = o.index;
        j["index2"] = o.index2;
        j["vacuous"] = r.vacuous;
        j["zeros_first"] = r.zeros_first.size();
        j["zeros_second"] = r.zeros_second.size();
        j["passed"] = r.passed;
        if (r.phi) j["phi"] = *r.phi;
        em.record(j);
        if (!r.passed) exit_override = 2;
      };
    });
  }

  // ---- kernel
  auto* ke = app.add_subcommand("kernel", "Smoothed sums, the double-log kernel and parameter plans");
  ke->require_subcommand(1);
  {
    auto* sub = ke->add_subcommand("gaussian", "Gaussian-weighted ideal-count sum");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->add_option("--y", o.y, "y > 0")->required();
    sub->add_option("--cap", o.cap, "Summation cap (default max(e^{8y}, weight 1e-15 point))");
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const double y = parse_real(o.y);
        std::optional<double> cap;
        if (!o.cap.empty()) cap = parse_real(o.cap);
        json j;
        j["disc"] = o.disc;
        j["y"] = y;
        j["cap"] = cap ? *cap : default_gaussian_cap(y);
        j["value"] = gaussian_weighted_sum(CoefficientSeries(o.disc), y, cap);
        em.record(j);
      };
    });

    sub = ke->add_subcommand("contour", "Line integral of the L-product against exp(s^2 y)");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->add_option("--y", o.y, "y > 0")->required();
    sub->add_option("--height", o.height, "Height cap T (0 selects sqrt(4 + 40/y))");
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const double y = parse_real(o.y);
        const auto r = contour_integral_gaussian(CoefficientSeries(o.disc), y, parse_real(o.height));
        json j;
        j["disc"] = o.disc;
        j["y"] = y;
        j["height"] = r.height;
        j["re"] = r.value.real();
        j["im"] = r.value.imag();
        j["error"] = r.error;
        j["panels"] = r.panels;
        em.record(j);
      };
    });

    sub = ke->add_subcommand("window", "Low tail, core window and high tail of the Gaussian sum");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->add_option("--y", o.y, "y > 0")->required();
    sub->add_option("--delta", o.delta, "delta in (0, 1)")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const double y = parse_real(o.y);
        const auto w = window_mass(CoefficientSeries(o.disc), y, parse_real(o.delta));
        json j;
        j["disc"] = o.disc;
        j["y"] = y;
        j["eta"] = w.eta;
        j["low"] = w.low;
        j["core"] = w.core;
        j["high"] = w.high;
        j["total"] = w.total();
        em.record(j);
      };
    });

    sub = ke->add_subcommand("prime-sum", "Triangle-weighted prime sum on (y^{(1-d)^2}, y]");
    character(sub);
    sub->add_option("--y", o.y, "y > 1");
    sub->add_option("--log-y", o.log_y, "log y (alternative to --y)");
    sub->add_option("--delta", o.delta, "delta in (0, 1)")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto chi = pick();
        if (o.y.empty() == o.log_y.empty()) throw Error(Errc::InvalidArgument, "give exactly one of --y, --log-y");
        const double y = o.y.empty() ? std::exp(parse_real(o.log_y)) : parse_real(o.y);
        const double dl = parse_real(o.delta);
        const cplx v = weighted_prime_sum(chi, y, dl);
        const double ly = std::log(y);
        const double c = kernel_constant(dl);
        json j;
        j["modulus"] = chi.modulus();
        j["index"] = chi.index();
        j["y"] = y;
        j["delta"] = dl;
        j["re"] = v.real();
        j["im"] = v.imag();
        j["kernel_constant"] = c;                  // f(1) without the (log y)^2 factor
        j["kernel_at_one"] = c * ly * ly;          // f(1) with it
        j["ratio"] = v.real() / (c * ly * ly);
        em.record(j);
      };
    });

    sub = ke->add_subcommand("zero-sum", "-sum f(rho) over scanned zeros with |gamma| <= 1, with annulus census");
    character(sub);
    sub->add_option("--y", o.y, "y > 1")->required();
    sub->add_option("--delta", o.delta, "delta in (0, 1)")->required();
    sub->add_option("--vartheta", o.vartheta, "Inner radius parameter >= 1");
    sub->add_option("--rect", o.rect, "Scan rectangle (default 0.05,1,-1,1)");
    sub->add_option("--resolution", o.resolution, "Scan resolution");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        const auto chi = pick();
        if (chi.modulus() < 3) throw Error(Errc::InvalidArgument, "zero-sum needs q >= 3");
        const auto rect = o.rect.empty() ? Rectangle{0.05, 1.0, -1.0, 1.0} : parse_rect(o.rect);
        const auto scan = scan_zeros(chi, rect, cfg_res(cfg), cfg.l_tol);
        const auto r = zero_side_sum(scan.zeros, parse_real(o.y), parse_real(o.delta),
                                     std::log(static_cast<double>(chi.modulus())), parse_real(o.vartheta));
        em.note("sum " + format_real(r.sum.real()) + (r.sum.imag() < 0 ? "" : "+") + format_real(r.sum.imag()) +
                "i over " + std::to_string(scan.zeros.size()) + " zeros");
        em.note("caveat: " + scan.caveat);
        for (const auto& row : r.census) {
          json j;
          j["r_low"] = row.r_low;
          j["r_high"] = row.r_high;
          j["count"] = row.count;
          j["comparison"] = row.comparison;
          em.record(j);
        }
      };
    });

    sub = ke->add_subcommand("plan", "Largest delta meeting the smoothing constraints");
    sub->add_option("--ell", o.ell, "Prime ell >= 3")->required();
    sub->add_option("--theta", o.theta, "theta in (0, 1/2)")->required();
    sub->add_option("--xi", o.xi, "xi > 0")->required();
    auto* qopt = sub->add_option("--modulus,-q", o.modulus, "Report y = kappa log q for this q");
    sub->callback([&, qopt] {
      action = [&, qopt](Emitter& em, const Config&) {
        const auto p = qt_plan(o.ell, parse_real(o.theta), parse_real(o.xi));
        json j;
        j["ell"] = p.ell;
        j["theta"] = p.theta;
        j["xi"] = p.xi;
        j["delta"] = p.delta;
        j["eta"] = p.eta;
        j["varpi"] = p.varpi;
        j["kappa"] = p.kappa;
        j["window_ok"] = p.window_ok;
        j["analytic_ok"] = p.analytic_ok;
        j["y"] = qopt->count() ? json(p.y_for(o.modulus)) : json(nullptr);
        em.record(j);
      };
    });
  }

  // ---- field
  auto* fi = app.add_subcommand("field", "Discriminants, class groups and prime censuses");
  fi->require_subcommand(1);
  std::unique_ptr<ClassGroupCache> cache;
  auto open_cache = [&](const Config& cfg, std::ostream& diag) -> ClassGroupCache* {
    if (cfg.cache.empty()) return nullptr;
    cache = std::make_unique<ClassGroupCache>(cfg.cache);
    for (const auto& w : cache->warnings()) diag << "warning: " << w << '\n';
    return cache.get();
  };
  {
    auto* sub = fi->add_subcommand("disc", "Fundamental discriminant of Q(sqrt d)");
    sub->add_option("--d", o.disc, "Squarefree d != 0, 1")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto k = quadratic_field(o.disc);
        json j;
        j["d"] = k.d;
        j["disc"] = k.discriminant;
        j["real"] = k.real;
        em.record(j);
      };
    });

    sub = fi->add_subcommand("cubic", "Discriminant of Q(d^{1/3})");
    sub->add_option("--d", o.d, "Cube-free d > 1")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto k = pure_cubic_discriminant(o.d);
        json j;
        j["d"] = k.d;
        j["a"] = k.a;
        j["b"] = k.b;
        j["disc"] = k.discriminant;
        j["ramified"] = k.ramified;
        j["gerth_bound"] = gerth_bound(k.d);
        em.record(j);
      };
    });

    sub = fi->add_subcommand("classgroup", "Form class group (narrow for D > 0)");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        auto* c = open_cache(cfg, err);
        const auto g = c ? c->get_or_compute(o.disc, cfg.class_group_cap) : class_group(o.disc, cfg.class_group_cap);
        json j;
        j["disc"] = g.discriminant;
        j["divisors"] = g.divisors;
        j["h"] = g.h();
        if (g.narrow()) j["narrow"] = true;
        em.record(j);
      };
    });

    sub = fi->add_subcommand("torsion", "ell-torsion of the class group");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->add_option("--ell", o.ell, "Prime ell")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        auto* c = open_cache(cfg, err);
        const auto g = c ? c->get_or_compute(o.disc, cfg.class_group_cap) : class_group(o.disc, cfg.class_group_cap);
        json j;
        j["disc"] = g.discriminant;
        j["ell"] = o.ell;
        j["h"] = g.h();
        j["h_ell"] = ell_torsion(g, o.ell);
        if (g.narrow()) j["narrow"] = true;
        em.record(j);
      };
    });

    sub = fi->add_subcommand("genus", "2-rank of the form class group");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        json j;
        j["disc"] = o.disc;
        j["two_rank"] = genus_two_rank(o.disc, cfg.class_group_cap);
        j["omega_minus_one"] = omega(static_cast<u64>(std::llabs(o.disc))) - 1;
        if (o.disc > 0) j["narrow"] = true;
        em.record(j);
      };
    });

    sub = fi->add_subcommand("split", "Primes p <= X of the given splitting type");
    sub->add_option("--kind", o.kind, "quadratic | pure-cubic | noncyclic-cubic | cyclic-cubic")->required();
    sub->add_option("--param", o.param, "Discriminant (quadratic, noncyclic-cubic) or d (pure-cubic)");
    character(sub);
    sub->add_option("--x", o.x, "Bound X")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        if (o.x > cfg.sieve_cap) throw Error(Errc::CapExceeded, "X exceeds sieve_cap");
        SplitCount r;
        if (o.kind == "cyclic-cubic") {
          const auto chi = pick();
          if (chi.order() != 3) throw Error(Errc::InvalidArgument, "cyclic cubic counting needs a character of order 3");
          r = split_prime_count(chi, o.x);
        } else {
          if (o.param.empty()) throw Error(Errc::InvalidArgument, "--param is required for this kind");
          const i64 p = static_cast<i64>(parse_real(o.param));
          SplitKind kind;
          if (o.kind == "quadratic") kind = SplitKind::Quadratic;
          else if (o.kind == "pure-cubic") kind = SplitKind::PureCubic;
          else if (o.kind == "noncyclic-cubic") kind = SplitKind::NoncyclicCubic;
          else throw Error(Errc::InvalidArgument, "unknown kind '" + o.kind + "'");
          r = split_prime_count(kind, p, o.x);
        }
        json j;
        j["kind"] = o.kind;
        j["x"] = o.x;
        j["count"] = r.count;
        j["primes"] = r.primes;
        em.record(j);
      };
    });

    sub = fi->add_subcommand("ideals", "Ideals of squarefree norm <= X coprime to D");
    sub->add_option("--disc", o.disc, "Fundamental discriminant")->required();
    sub->add_option("--x", o.x, "Bound X")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        if (o.x > cfg.sieve_cap) throw Error(Errc::CapExceeded, "X exceeds sieve_cap");
        json j;
        j["disc"] = o.disc;
        j["x"] = o.x;
        j["count"] = squarefree_norm_ideal_count(o.disc, o.x);
        em.record(j);
      };
    });

    sub = fi->add_subcommand("family", "Smooth fundamental discriminants, one per line");
    sub->add_option("--max", o.max_abs, "Bound on |D|")->required();
    sub->add_option("--smooth", o.smooth, "Exponent: P(|D|) <= |D|^smooth");
    sub->add_option("--signature", o.signature, "imaginary | real | both");
    sub->add_option("--count", o.count, "Stop after this many");
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        std::optional<std::size_t> cap;
        if (o.count > 0) cap = o.count;
        for (i64 d : smooth_family(o.max_abs, parse_real(o.smooth), parse_signature(o.signature), cap)) {
          json j;
          j["disc"] = d;
          em.record(j);
        }
      };
    });
  }

  // ---- experiment
  auto* ex = app.add_subcommand("experiment", "Torsion-bound experiments and parameter checks");
  ex->require_subcommand(1);
  {
    auto* sub = ex->add_subcommand("quadratic", "Quadratic families: h, h_ell against the prime or ideal census");
    sub->add_option("--family-file", o.family_file, "One discriminant per line ('#' comments)");
    sub->add_option("--family-count", o.count, "Use the N smallest imaginary fundamental discriminants");
    sub->add_option("--ell", o.ell, "Prime ell");
    sub->add_option("--varpi", o.varpi, "Census exponent, X = |D|^varpi")->required();
    sub->add_option("--epsilon", o.epsilon, "epsilon in |D|^{1/2+eps}/M");
    sub->add_flag("--ideals", o.ideals, "Count squarefree-norm ideals instead of split primes");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        if (o.family_file.empty() == (o.count == 0)) {
          throw Error(Errc::InvalidArgument, "give exactly one of --family-file, --family-count");
        }
        const auto family = o.family_file.empty() ? smallest_imaginary(o.count) : read_family_file(o.family_file);
        QuadraticExperiment p;
        p.ell = o.ell;
        p.varpi = parse_real(o.varpi);
        p.epsilon = parse_real(o.epsilon);
        p.use_ideals = o.ideals;
        p.threads = cfg.threads;
        p.class_group_cap = cfg.class_group_cap;
        auto* c = open_cache(cfg, err);
        const auto rows = run_quadratic_experiment(family, p, c);
        em.note("implied constants are unspecified or ineffective; ev_bound and exponents are empirical ratios, not verdicts");
        em.note("positive discriminants use the narrow class group");
        if (cfg.format == "csv") {
          std::ostringstream ss;
          write_experiment_csv(ss, rows);
          em.csv_block(ss.str());
          return;
        }
        for (const auto& r : rows) {
          json j;
          j["disc"] = r.disc;
          j["kind"] = r.kind;
          j["h"] = *r.h;
          j["h_ell"] = *r.h_ell;
          j["ell"] = r.ell;
          j["varpi"] = r.varpi;
          j["X"] = r.x;
          j["M"] = r.m;
          j["epsilon"] = r.epsilon;
          j["ev_bound"] = r.ev_bound ? json(*r.ev_bound) : json(nullptr);
          j["empirical_exponent"] = *r.empirical_exponent;
          j["predicted_exponent"] = r.predicted_exponent;
          j["narrow"] = r.narrow;
          em.record(j);
        }
      };
    });

    sub = ex->add_subcommand("pure-cubic", "Pure cubic fields: census, 9^omega(d) bound and ingested h");
    sub->add_option("--d-min", o.d_min, "Smallest radicand");
    sub->add_option("--d-max", o.d_max, "Largest radicand");
    sub->add_option("--ell", o.ell, "Prime ell");
    sub->add_option("--varpi", o.varpi, "Census exponent, X = |D|^varpi")->required();
    sub->add_option("--epsilon", o.epsilon, "epsilon in |D|^{1/2+eps}/M");
    sub->add_option("--ingest", o.ingest, "CSV of class numbers: label,disc,h,structure");
    sub->callback([&] {
      action = [&](Emitter& em, const Config& cfg) {
        std::vector<IngestedClassRecord> recs;
        if (!o.ingest.empty()) recs = ingest_class_numbers(std::filesystem::path(o.ingest));
        PureCubicExperiment p;
        p.ell = o.ell;
        p.varpi = parse_real(o.varpi);
        p.epsilon = parse_real(o.epsilon);
        p.threads = cfg.threads;
        const auto rows = run_pure_cubic_experiment(o.d_min, o.d_max, p, recs);
        em.note("class numbers come only from ingested tables; empty h columns mean no record");
        if (cfg.format == "csv") {
          std::ostringstream ss;
          write_experiment_csv(ss, rows);
          em.csv_block(ss.str());
          return;
        }
        for (const auto& r : rows) {
          json j;
          j["disc"] = r.disc;
          j["d"] = r.d;
          j["h"] = r.h ? json(*r.h) : json(nullptr);
          j["h_ell"] = r.h_ell ? json(*r.h_ell) : json(nullptr);
          j["ell"] = r.ell;
          j["varpi"] = r.varpi;
          j["X"] = r.x;
          j["M"] = r.m;
          j["ev_bound"] = r.ev_bound ? json(*r.ev_bound) : json(nullptr);
          j["predicted_exponent"] = r.predicted_exponent;
          j["gerth_bound"] = *r.gerth;
          em.record(j);
        }
      };
    });

    sub = ex->add_subcommand("hlgr-check", "Check that (k, delta) meets the xi threshold for ell");
    sub->add_option("--k", o.k, "Differencing depth")->required();
    sub->add_option("--delta", o.delta, "Smoothness exponent (a/b or decimal)")->required();
    sub->add_option("--ell", o.ell, "Prime ell")->required();
    sub->callback([&] {
      action = [&](Emitter& em, const Config&) {
        const auto c = hlgr_parameter_check(static_cast<unsigned>(o.k), parse_real(o.delta), o.ell);
        json j;
        j["k"] = c.k;
        j["delta"] = c.delta;
        j["ell"] = c.ell;
        j["L"] = c.big_l;
        j["theta"] = c.theta;
        j["xi"] = c.xi;
        j["threshold"] = c.threshold;
        j["pass"] = c.pass;
        em.record(j);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    // subcommand help is raised as CallForHelp from the subcommand
    err << "error: " << e.what() << '\n' << app.help();
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (!action) {
    err << app.help();
    return 1;
  }

  try {
    Config cfg = load_config(o.config_path.empty() ? std::nullopt
                                                   : std::optional<std::filesystem::path>(o.config_path));
    if (const char* env = std::getenv(kCacheEnv); env && *env) cfg.cache = env;
    nlohmann::json flags = nlohmann::json::object();
    if (!o.format.empty()) flags["format"] = o.format;
    if (o.threads > 0) flags["threads"] = o.threads;
    if (!o.cache.empty()) flags["cache"] = o.cache;
    apply_overrides(cfg, flags);

    std::string invocation = "torsion_probe";
    for (int i = 1; i < argc; ++i) invocation += std::string(" ") + argv[i];

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.out.empty()) {
      file.open(o.out, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(Errc::IOError, "cannot write " + o.out);
      sink = &file;
    }
    Emitter em(*sink, cfg, invocation);
    action(em, cfg);
    em.finish();
    return exit_override;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (error_class(e.code())) {
      case ErrorClass::Usage: return 1;
      case ErrorClass::Constraint: return 2;
      case ErrorClass::Data: return 3;
      case ErrorClass::Numeric: return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace torsion::cli
