#include "torsion/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torsion/error.hpp"

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;

bool contains(const Rectangle& r, cplx s) {
  return r.sigma_min <= s.real() && s.real() <= r.sigma_max && r.t_min <= s.imag() && s.imag() <= r.t_max;
}

void require_nondegenerate(const Rectangle& r) {
  if (!(r.sigma_min < r.sigma_max) || !(r.t_min < r.t_max) || !std::isfinite(r.width()) ||
      !std::isfinite(r.height())) {
    throw Error(Errc::DegenerateRegion, "rectangle has zero area");
  }
}

}  // namespace

LFunction::LFunction(const DirichletCharacter& chi, double tol) : chi_(chi), tol_(tol) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  const auto prim = primitivize(chi);
  conductor_ = prim.conductor;
  const double f = static_cast<double>(conductor_);
  for (u64 a = 1; a <= conductor_; ++a) {
    const auto v = prim.character(static_cast<i64>(a));
    if (!v.is_zero()) residues_.emplace_back(static_cast<double>(a) / f, v.to_complex());
  }
  for (const auto& pp : chi.factorization()) {
    if (conductor_ % pp.p == 0) continue;
    const auto v = prim.character(static_cast<i64>(pp.p));
    missing_.push_back({std::log(static_cast<double>(pp.p)), v.to_complex()});
  }
}

LEvaluation LFunction::primitive_part(cplx s, bool completed) const {
  const double tol = 0.1 * tol_;
  if (conductor_ == 1) {
    const auto h = hurwitz_entire(s, 1.0, tol);
    const cplx w = s - 1.0;
    if (completed) return {w * h.value + 1.0, h.value + w * h.derivative};
    if (w == cplx(0.0)) throw Error(Errc::PoleAtOne, "pole at s = 1");
    return {h.value + 1.0 / w, h.derivative - 1.0 / (w * w)};
  }
  cplx sum = 0.0, dsum = 0.0;
  for (const auto& [x, c] : residues_) {
    const auto h = hurwitz_entire(s, x, tol);
    sum += c * h.value;
    dsum += c * h.derivative;
  }
  const double lf = std::log(static_cast<double>(conductor_));
  const cplx scale = std::exp(-s * lf);
  return {scale * sum, scale * (dsum - lf * sum)};
}

LEvaluation LFunction::euler_correction(cplx s) const {
  cplx p = 1.0, dp = 0.0;
  for (const auto& ef : missing_) {
    const cplx x = ef.value * std::exp(-s * ef.log_p);
    const cplx factor = 1.0 - x;
    const cplx dfactor = ef.log_p * x;
    dp = dp * factor + p * dfactor;
    p *= factor;
  }
  return {p, dp};
}

LEvaluation LFunction::eval(cplx s) const {
  if (has_pole() && s == cplx(1.0)) throw Error(Errc::PoleAtOne, "principal L-function has a pole at s = 1");
  const auto a = primitive_part(s, false);
  if (missing_.empty()) return a;
  const auto e = euler_correction(s);
  return {a.value * e.value, a.derivative * e.value + a.value * e.derivative};
}

LEvaluation LFunction::entire(cplx s) const {
  const auto a = primitive_part(s, true);
  if (missing_.empty()) return a;
  const auto e = euler_correction(s);
  return {a.value * e.value, a.derivative * e.value + a.value * e.derivative};
}

cplx evaluate_L(const DirichletCharacter& chi, cplx s, double tol) {
  if (!(s.real() > -1.0)) throw Error(Errc::InvalidArgument, "evaluation needs Re(s) > -1");
  return LFunction(chi, tol).eval(s).value;
}

cplx log_derivative(const DirichletCharacter& chi, cplx s, double tol) {
  if (!(s.real() > -1.0)) throw Error(Errc::InvalidArgument, "evaluation needs Re(s) > -1");
  if (chi.is_principal() && std::abs(s - 1.0) < 1e-12) {
    throw Error(Errc::NearZeroOrPole, "s is at the pole");
  }
  const auto v = LFunction(chi, tol).eval(s);
  const double threshold = std::max(1e-10, 100.0 * tol);
  if (std::abs(v.value) < threshold) throw Error(Errc::NearZeroOrPole, "|L(s)| below safety threshold");
  return v.derivative / v.value;
}

SupNormReport sup_norm(const DirichletCharacter& chi, double theta, double t_max, double resolution, double tol) {
  if (!(theta > -1.0 && theta < 2.0)) throw Error(Errc::InvalidArgument, "theta out of range");
  if (!(t_max > 0.0)) throw Error(Errc::InvalidArgument, "t_max must be positive");
  return sup_norm(LFunction(chi, tol), Rectangle{1.0 - theta, 2.0, -t_max, t_max}, resolution);
}

SupNormReport sup_norm(const LFunction& lf, const Rectangle& region, double resolution) {
  require_nondegenerate(region);
  if (!(resolution > 0.0)) throw Error(Errc::InvalidArgument, "resolution must be positive");
  if (lf.has_pole() && contains(region, cplx(1.0))) {
    throw Error(Errc::PoleInRegion, "principal character has a pole inside the rectangle");
  }

  auto axis = [&](double lo, double hi, double must) {
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / resolution)) + 1;
    std::vector<double> v;
    v.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) v.push_back(i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1));
    if (lo < must && must < hi) v.push_back(must);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto sig = axis(region.sigma_min, region.sigma_max, 1.0);
  const auto ts = axis(region.t_min, region.t_max, 0.0);

  SupNormReport rep;
  rep.region = region;
  rep.resolution = resolution;
  struct Peak {
    double abs;
    cplx at;
  };
  std::vector<Peak> grid;
  grid.reserve(sig.size() * ts.size());
  for (double t : ts) {
    for (double s : sig) {
      const cplx z(s, t);
      grid.push_back({std::abs(lf.eval(z).value), z});
    }
  }
  rep.samples = grid.size();
  const std::size_t keep = std::min<std::size_t>(8, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + keep, grid.end(),
                    [](const Peak& a, const Peak& b) { return a.abs > b.abs; });
  rep.max_abs = grid.front().abs;
  rep.argmax = grid.front().at;

  // compass search around the largest grid values, clamped to the rectangle
  auto clamp = [&](cplx z) {
    return cplx(std::clamp(z.real(), region.sigma_min, region.sigma_max), std::clamp(z.imag(), region.t_min, region.t_max));
  };
  for (std::size_t k = 0; k < keep; ++k) {
    cplx best = grid[k].at;
    double best_abs = grid[k].abs;
    double step = resolution;
    while (step > resolution * 1e-3) {
      bool moved = false;
      for (int d = 0; d < 8; ++d) {
        const cplx dir = std::polar(1.0, kPi * d / 4.0);
        const cplx z = clamp(best + step * dir);
        if (z == best) continue;
        const double v = std::abs(lf.eval(z).value);
        ++rep.samples;
        if (v > best_abs) {
          best_abs = v;
          best = z;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (best_abs > rep.max_abs) {
      rep.max_abs = best_abs;
      rep.argmax = best;
    }
  }
  rep.phi = std::log(rep.max_abs);
  return rep;
}

namespace {

struct BoundaryHit {
  cplx where;
};

class Scanner {
 public:
  Scanner(const LFunction& lf, double resolution) : lf_(lf), res_(resolution), min_len_(std::max(resolution * 1e-3, 1e-12)) {}

  struct Sample {
    cplx z;
    cplx f;
    cplx df;
  };

  Sample sample(cplx z) {
    ++evaluations;
    const auto v = lf_.entire(z);
    if (std::abs(v.value) < kZeroGuard) throw BoundaryHit{z};
    return {z, v.value, v.derivative};
  }

  double walk(cplx a, cplx b) {
    Sample cur = sample(a);
    std::vector<Sample> pending{sample(b)};
    double total = 0.0;
    while (!pending.empty()) {
      const Sample& nxt = pending.back();
      const double len = std::abs(nxt.z - cur.z);
      const double darg = std::arg(nxt.f / cur.f);
      const double rate = std::max(std::abs(cur.df / cur.f), std::abs(nxt.df / nxt.f));
      if (std::abs(darg) <= kPi / 4.0 && len * rate <= 0.3) {
        total += darg;
        cur = nxt;
        pending.pop_back();
        continue;
      }
      if (len < min_len_) throw BoundaryHit{cur.z};
      pending.push_back(sample(0.5 * (cur.z + nxt.z)));
    }
    return total;
  }

  int winding(const Rectangle& r) {
    const cplx c0(r.sigma_min, r.t_min), c1(r.sigma_max, r.t_min), c2(r.sigma_max, r.t_max), c3(r.sigma_min, r.t_max);
    const double total = walk(c0, c1) + walk(c1, c2) + walk(c2, c3) + walk(c3, c0);
    const double turns = total / (2.0 * kPi);
    const double w = std::round(turns);
    if (std::abs(turns - w) > 0.1) throw BoundaryHit{c0};
    return static_cast<int>(w);
  }

  std::optional<Zero> newton(const Rectangle& r) {
    cplx s(0.5 * (r.sigma_min + r.sigma_max), 0.5 * (r.t_min + r.t_max));
    const double mw = 0.05 * r.width(), mh = 0.05 * r.height();
    const Rectangle grown{r.sigma_min - mw, r.sigma_max + mw, r.t_min - mh, r.t_max + mh};
    for (int it = 0; it < 60; ++it) {
      ++evaluations;
      const auto v = lf_.entire(s);
      if (v.derivative == cplx(0.0)) return std::nullopt;
      const cplx step = v.value / v.derivative;
      s -= step;
      if (!contains(grown, s) || !std::isfinite(s.real()) || !std::isfinite(s.imag())) return std::nullopt;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    ++evaluations;
    const auto v = lf_.entire(s);
    double residual = std::abs(v.value);
    if (lf_.has_pole()) residual /= std::abs(s - 1.0);
    if (!(residual < kResidualTol)) return std::nullopt;
    if (!contains(r, s)) return std::nullopt;
    return Zero{s.real(), s.imag(), residual};
  }

  void process(const Rectangle& r, int w, std::vector<Zero>& out) {
    if (w == 0) return;
    if (w < 0) throw Error(Errc::BoundaryZeroSuspected, "negative winding number");
    const double size = std::max(r.width(), r.height());
    if (w == 1) {
      if (auto z = newton(r)) {
        out.push_back(*z);
        return;
      }
      if (size <= res_) throw Error(Errc::ResolutionExhausted, "Newton refinement failed in a minimal cell");
    } else if (size <= res_) {
      throw Error(Errc::ResolutionExhausted, std::to_string(w) + " zeros unresolved in a minimal cell");
    }
    static constexpr double kSplits[] = {0.5137, 0.4709, 0.5411, 0.4423};
    for (double frac : kSplits) {
      Rectangle a = r, b = r;
      if (r.width() >= r.height()) {
        a.sigma_max = b.sigma_min = r.sigma_min + frac * r.width();
      } else {
        a.t_max = b.t_min = r.t_min + frac * r.height();
      }
      int wa, wb;
      try {
        wa = winding(a);
        wb = winding(b);
      } catch (const BoundaryHit&) {
        continue;
      }
      if (wa + wb != w) continue;
      process(a, wa, out);
      process(b, wb, out);
      return;
    }
    throw Error(Errc::BoundaryZeroSuspected, "no clean subdivision of a cell with winding " + std::to_string(w));
  }

  std::size_t evaluations = 0;

 private:
  static constexpr double kZeroGuard = 1e-11;
  static constexpr double kResidualTol = 1e-8;
  const LFunction& lf_;
  double res_;
  double min_len_;
};

}  // namespace

int winding_number(const LFunction& lf, const Rectangle& region, double resolution) {
  require_nondegenerate(region);
  Scanner sc(lf, resolution);
  try {
    return sc.winding(region);
  } catch (const BoundaryHit& h) {
    throw Error(Errc::BoundaryZeroSuspected,
                "L nearly vanishes on the boundary near " + std::to_string(h.where.real()) + "+" +
                    std::to_string(h.where.imag()) + "i");
  }
}

ZeroScanReport scan_zeros(const DirichletCharacter& chi, const Rectangle& region, double resolution, double tol) {
  return scan_zeros(LFunction(chi, tol), region, resolution);
}

ZeroScanReport scan_zeros(const LFunction& lf, const Rectangle& region, double resolution) {
  require_nondegenerate(region);
  if (!(resolution > 0.0)) throw Error(Errc::InvalidArgument, "resolution must be positive");
  Scanner sc(lf, resolution);
  ZeroScanReport rep;
  rep.resolution = resolution;
  static constexpr double kPerturb[] = {0.0, 0.37, 0.71, 1.13};
  bool done = false;
  for (double p : kPerturb) {
    const double d = p * resolution;
    const Rectangle r{region.sigma_min - d, region.sigma_max + d, region.t_min - d, region.t_max + d};
    try {
      rep.winding = sc.winding(r);
    } catch (const BoundaryHit&) {
      continue;
    }
    rep.region = r;
    rep.perturbed = p != 0.0;
    done = true;
    break;
  }
  if (!done) throw Error(Errc::BoundaryZeroSuspected, "boundary stays within resolution of a zero after perturbation");
  sc.process(rep.region, rep.winding, rep.zeros);
  std::sort(rep.zeros.begin(), rep.zeros.end(), [](const Zero& a, const Zero& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
  });
  rep.evaluations = sc.evaluations;
  rep.caveat = "floating-point argument principle at resolution " + std::to_string(resolution) +
               "; zeros closer than this to each other or the boundary are not separated";
  return rep;
}

std::string_view verdict_name(ZeroFreeVerdict v) {
  switch (v) {
    case ZeroFreeVerdict::ZeroFree: return "zero-free";
    case ZeroFreeVerdict::OneRealZero: return "one-real-zero";
    case ZeroFreeVerdict::Violation: return "violation";
  }
  return "?";
}

HypothesisFlags check_hypotheses(double theta, double phi, const DirichletCharacter& chi) {
  HypothesisFlags h;
  h.phi_window = phi * std::exp(-phi) <= theta && theta <= 1.0 && 1.0 <= phi;
  const double q = static_cast<double>(chi.modulus());
  h.loglog = phi >= theta * (1.0 + std::log(std::log(3.0 * q)));
  h.chi_squared_applicable = chi.order() != 2;
  return h;
}

double admissible_phi(double measured_phi, double theta, u64 modulus) {
  if (!(theta > 0.0)) throw Error(Errc::InvalidArgument, "theta must be positive");
  const double q = static_cast<double>(modulus);
  const double lo = std::max({measured_phi, 1.0, theta * (1.0 + std::log(std::log(3.0 * q)))});
  auto g = [](double phi) { return phi * std::exp(-phi); };
  if (g(lo) <= theta) return lo;
  double a = lo, b = lo + 1.0;
  while (g(b) > theta) b = a + 2.0 * (b - a);
  for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
    const double m = 0.5 * (a + b);
    (g(m) <= theta ? b : a) = m;
  }
  return b;
}

CensusClassification classify_census(const LFunction& lf, std::span<const Zero> zeros, double resolution) {
  CensusClassification out;
  const auto& chi = lf.character();
  if (zeros.empty()) return out;
  auto violation = [&](std::string msg) {
    out.verdict = ZeroFreeVerdict::Violation;
    out.violations.push_back(std::move(msg));
  };
  auto where = [](const Zero& z) {
    return "zero at " + std::to_string(z.beta) + (z.gamma < 0 ? "" : "+") + std::to_string(z.gamma) + "i";
  };
  if (!chi.is_real()) {
    for (const auto& z : zeros) violation("complex character with " + where(z));
    return out;
  }
  if (zeros.size() > 1) {
    violation("real character with " + std::to_string(zeros.size()) + " zeros in the region");
    return out;
  }
  const Zero& z = zeros.front();
  if (std::abs(z.gamma) > 1e-8) {
    violation("non-real " + where(z));
    return out;
  }
  // simplicity: local winding 1 and a sign change along the real axis
  const double h = std::min(resolution, 1e-3);
  const Rectangle local{z.beta - h, z.beta + h, -h, h};
  int w = 0;
  try {
    w = winding_number(lf, local, h * 0.1);
  } catch (const Error&) {
    w = -1;
  }
  if (w != 1) violation("real zero at " + std::to_string(z.beta) + " has local winding " + std::to_string(w));
  const double left = lf.entire(cplx(z.beta - h)).value.real();
  const double right = lf.entire(cplx(z.beta + h)).value.real();
  if (!(left * right < 0.0)) violation("no sign change across real zero at " + std::to_string(z.beta));
  if (out.violations.empty()) {
    out.verdict = ZeroFreeVerdict::OneRealZero;
    out.exceptional = z;
  }
  return out;
}

ZeroFreeCertificate certify_zero_free(const DirichletCharacter& chi, double theta, double phi, double c2, double t_cap,
                                      double resolution, double tol) {
  if (!(theta > 0.0) || !(phi > 0.0) || !(c2 > 0.0)) {
    throw Error(Errc::InvalidArgument, "theta, phi and C2 must be positive");
  }
  if (!(t_cap > 0.0)) throw Error(Errc::DegenerateRegion, "t_cap must be positive");
  ZeroFreeCertificate cert;
  cert.modulus = chi.modulus();
  cert.index = chi.index();
  cert.theta = theta;
  cert.phi = phi;
  cert.c2 = c2;
  cert.radius = c2 * theta / phi;
  cert.t_cap = t_cap;
  cert.hypotheses = check_hypotheses(theta, phi, chi);
  const LFunction lf(chi, tol);
  const Rectangle region{1.0 - cert.radius, 1.5, -t_cap, t_cap};
  cert.scan = scan_zeros(lf, region, std::min(resolution, cert.radius));
  cert.census = classify_census(lf, cert.scan.zeros, cert.scan.resolution);
  return cert;
}

PairExclusionReport pair_exclusion(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                   const ScanRegion& region, double resolution, std::optional<double> hypothesis_theta) {
  if (chi1.modulus() != chi2.modulus()) throw Error(Errc::InvalidArgument, "characters have different moduli");
  if (chi1 == chi2) throw Error(Errc::InvalidArgument, "characters must be distinct");
  if (chi1.order() != 2 || chi2.order() != 2) throw Error(Errc::InvalidArgument, "characters must have order 2");
  PairExclusionReport rep;
  if (region.zero_area()) {
    rep.vacuous = true;
    return rep;
  }
  const Rectangle r{region.sigma_min, region.sigma_max, -region.t_cap, region.t_cap};
  rep.zeros_first = scan_zeros(chi1, r, resolution).zeros;
  rep.zeros_second = scan_zeros(chi2, r, resolution).zeros;
  rep.passed = rep.zeros_first.empty() || rep.zeros_second.empty();
  if (hypothesis_theta) {
    const double th = *hypothesis_theta;
    rep.phi = std::array<double, 3>{sup_norm(chi1, th, 3.0, 0.05).phi, sup_norm(chi2, th, 3.0, 0.05).phi,
                                    sup_norm(chi1 * chi2, th, 3.0, 0.05).phi};
  }
  return rep;
}

double three_four_one_partial(const DirichletCharacter& chi, double sigma0, double t, u64 truncation) {
  if (!(sigma0 > 1.0)) throw Error(Errc::InvalidArgument, "sigma0 must exceed 1");
  double total = 0.0;
  if (truncation < 2) return 0.0;
  const double order = static_cast<double>(chi.order());
  for_each_prime(2, truncation, [&](u64 p) {
    const double lp = std::log(static_cast<double>(p));
    const i64 e = chi.exponent(static_cast<i64>(p));
    u64 n = p;
    for (u64 k = 1;; ++k) {
      const double ln = k * lp;
      double bracket;
      if (e < 0) {
        bracket = 3.0;
      } else {
        // 3 + 4 cos x + cos 2x = 2 (1 + cos x)^2
        const double x = 2.0 * kPi * std::fmod(static_cast<double>(e) * k, order) / order - t * ln;
        const double c = 1.0 + std::cos(x);
        bracket = 2.0 * c * c;
      }
      total += lp * std::exp(-sigma0 * ln) * bracket;
      if (n > truncation / p) break;
      n *= p;
    }
  });
  return total;
}

}  // namespace torsion
