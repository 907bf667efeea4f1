#include "torsion/forms.hpp"

#include <algorithm>
#include <numeric>

#include "torsion/error.hpp"

namespace torsion {

namespace {

i64 abs64(i64 x) { return x < 0 ? -x : x; }

bool is_square(i64 d) {
  if (d < 0) return false;
  const u64 r = isqrt(static_cast<u64>(d));
  return r * r == static_cast<u64>(d);
}

i64 c_from(i64 a, i64 b, i64 disc) {
  const i128 num = static_cast<i128>(b) * b - disc;
  return static_cast<i64>(num / (4 * static_cast<i128>(a)));
}

bool primitive(const BinaryQuadraticForm& f) {
  return std::gcd(std::gcd(abs64(f.a), abs64(f.b)), abs64(f.c)) == 1;
}

}  // namespace

std::string BinaryQuadraticForm::str() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

BinaryQuadraticForm principal_form(i64 disc) {
  const i64 r = floor_mod(disc, 4);
  if (r != 0 && r != 1) throw Error(Errc::InvalidArgument, std::to_string(disc) + " is not a discriminant");
  const i64 b = r;
  return {1, b, (b * b - disc) / 4};
}

bool is_reduced_definite(const BinaryQuadraticForm& f) {
  if (f.a <= 0 || abs64(f.b) > f.a || f.a > f.c) return false;
  if ((abs64(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

bool is_reduced_indefinite(const BinaryQuadraticForm& f) {
  const i64 d = f.discriminant();
  if (d <= 0) return false;
  const i64 s = static_cast<i64>(isqrt(static_cast<u64>(d)));
  const i64 a2 = 2 * abs64(f.a);
  return f.b > 0 && f.b <= s && a2 + f.b >= s + 1 && a2 - f.b <= s;
}

BinaryQuadraticForm reduce_definite(BinaryQuadraticForm f) {
  const i64 disc = f.discriminant();
  if (disc >= 0 || f.a <= 0) throw Error(Errc::InvalidArgument, "reduce_definite needs a positive-definite form");
  for (;;) {
    if (!(-f.a < f.b && f.b <= f.a)) {
      // b -> b + 2ak with -a < b' <= a
      const i64 two_a = 2 * f.a;
      i64 r = floor_mod(f.b, two_a);
      if (r > f.a) r -= two_a;
      f.b = r;
      f.c = c_from(f.a, f.b, disc);
    }
    if (f.a > f.c) {
      f = {f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

BinaryQuadraticForm rho(const BinaryQuadraticForm& f) {
  const i64 disc = f.discriminant();
  if (disc <= 0 || f.c == 0) throw Error(Errc::InvalidArgument, "rho needs an indefinite form with c != 0");
  const i64 s = static_cast<i64>(isqrt(static_cast<u64>(disc)));
  const i64 ac = abs64(f.c);
  i64 r;
  if (ac > s) {
    r = floor_mod(-f.b, 2 * ac);
    if (r > ac) r -= 2 * ac;
  } else {
    r = s - floor_mod(s + f.b, 2 * ac);
  }
  return {f.c, r, c_from(f.c, r, disc)};
}

BinaryQuadraticForm reduce_indefinite(BinaryQuadraticForm f) {
  for (int guard = 0; !is_reduced_indefinite(f); ++guard) {
    if (guard > 100000) throw Error(Errc::InvalidArgument, "indefinite reduction did not terminate");
    f = rho(f);
  }
  return f;
}

BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g) {
  const i64 disc = f.discriminant();
  if (g.discriminant() != disc) throw Error(Errc::InvalidArgument, "composition needs equal discriminants");
  const i64 s = (f.b + g.b) / 2;
  const auto g1 = extended_gcd(f.a, g.a);
  const auto g2 = extended_gcd(g1.g, s);
  const i64 e = g2.g;
  const i128 u = static_cast<i128>(g2.x) * g1.x, v = static_cast<i128>(g2.x) * g1.y, w = g2.y;
  const i128 a3 = static_cast<i128>(f.a) / e * (g.a / e);
  const i128 num = static_cast<i128>(f.a) * g.b * u + static_cast<i128>(g.a) * f.b * v +
                   w * ((static_cast<i128>(f.b) * g.b + disc) / 2);
  const i128 m = 2 * (a3 < 0 ? -a3 : a3);
  i128 b3 = (num / e) % m;
  if (b3 < 0) b3 += m;
  const i128 c3 = (b3 * b3 - disc) / (4 * a3);
  return {static_cast<i64>(a3), static_cast<i64>(b3), static_cast<i64>(c3)};
}

std::vector<BinaryQuadraticForm> enumerate_reduced_definite(i64 disc) {
  if (disc >= 0) throw Error(Errc::InvalidArgument, "definite enumeration needs D < 0");
  std::vector<BinaryQuadraticForm> out;
  const i64 parity = floor_mod(disc, 2);
  for (i64 a = 1; 3 * a * a <= -disc; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (floor_mod(b, 2) != parity) continue;
      const i64 num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a || (b < 0 && a == c)) continue;
      const BinaryQuadraticForm f{a, b, c};
      if (primitive(f)) out.push_back(f);
    }
  }
  return out;
}

FormClassGroup::FormClassGroup(i64 disc) : disc_(disc) {
  const i64 r = floor_mod(disc, 4);
  if ((r != 0 && r != 1) || disc == 0 || is_square(disc)) {
    throw Error(Errc::InvalidArgument, std::to_string(disc) + " is not a non-square discriminant");
  }
  if (disc < 0) {
    reps_ = enumerate_reduced_definite(disc);
    for (std::size_t i = 0; i < reps_.size(); ++i) index_.emplace(reps_[i], i);
    return;
  }
  const i64 s = static_cast<i64>(isqrt(static_cast<u64>(disc)));
  std::vector<BinaryQuadraticForm> reduced;
  for (i64 b = 1; b <= s; ++b) {
    if (floor_mod(b, 2) != r) continue;
    const i64 n = (disc - b * b) / 4;  // = -ac > 0
    // s - b < 2a <= s + b, a | n
    for (i64 a = (s - b) / 2 + 1; 2 * a - b <= s; ++a) {
      if (a <= 0 || n % a != 0) continue;
      for (i64 sign : {1, -1}) {
        const BinaryQuadraticForm f{sign * a, b, -sign * (n / a)};
        if (primitive(f)) reduced.push_back(f);
      }
    }
  }
  std::sort(reduced.begin(), reduced.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  });
  const auto id_form = reduce_indefinite(principal_form(disc));
  std::vector<std::vector<BinaryQuadraticForm>> cycles;
  std::unordered_map<BinaryQuadraticForm, std::size_t, FormHash> cycle_of;
  for (const auto& f : reduced) {
    if (cycle_of.contains(f)) continue;
    std::vector<BinaryQuadraticForm> cyc{f};
    cycle_of.emplace(f, cycles.size());
    for (auto g = rho(f); !(g == f); g = rho(g)) {
      cycle_of.emplace(g, cycles.size());
      cyc.push_back(g);
      if (cyc.size() > reduced.size()) throw Error(Errc::InvalidArgument, "rho cycle did not close");
    }
    cycles.push_back(std::move(cyc));
  }
  const std::size_t id_cycle = cycle_of.at(id_form);
  std::vector<std::size_t> order(cycles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_partition(order.begin(), order.end(), [&](std::size_t c) { return c == id_cycle; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& cyc = cycles[order[k]];
    reps_.push_back(cyc == cycles[id_cycle] ? id_form : cyc.front());
    for (const auto& g : cyc) index_.emplace(g, k);
  }
}

std::size_t FormClassGroup::class_of(const BinaryQuadraticForm& f) const {
  if (f.discriminant() != disc_) throw Error(Errc::InvalidArgument, "form " + f.str() + " has the wrong discriminant");
  BinaryQuadraticForm g = f;
  if (disc_ < 0) {
    if (g.a < 0) throw Error(Errc::InvalidArgument, "negative definite form " + f.str());
    g = reduce_definite(g);
  } else {
    g = reduce_indefinite(g);
  }
  const auto it = index_.find(g);
  if (it == index_.end()) throw Error(Errc::InvalidArgument, "form " + f.str() + " is not primitive");
  return it->second;
}

std::size_t FormClassGroup::compose(std::size_t i, std::size_t j) const {
  return class_of(torsion::compose(reps_.at(i), reps_.at(j)));
}

std::size_t FormClassGroup::inverse(std::size_t i) const { return class_of(reps_.at(i).inverse()); }

std::size_t FormClassGroup::power(std::size_t i, u64 k) const {
  std::size_t result = identity(), base = i;
  while (k > 0) {
    if (k & 1) result = compose(result, base);
    k >>= 1;
    if (k > 0) base = compose(base, base);
  }
  return result;
}

u64 FormClassGroup::element_order(std::size_t i) const {
  u64 ord = order();
  for (const auto& pp : factorize(order())) {
    while (ord % pp.p == 0 && power(i, ord / pp.p) == identity()) ord /= pp.p;
  }
  return ord;
}

std::vector<u64> FormClassGroup::elementary_divisors() const {
  const u64 h = order();
  if (h == 1) return {};
  std::vector<u64> orders(h);
  for (std::size_t i = 0; i < h; ++i) orders[i] = element_order(i);
  // exponents of the cyclic p-factors, largest first, per prime
  std::vector<std::vector<unsigned>> parts;
  std::vector<u64> primes;
  for (const auto& pp : factorize(h)) {
    // n[k] = #{x : x^{p^k} = 1}; cyclic factors of exponent >= k number log_p(n[k] / n[k-1])
    std::vector<u64> n{1};
    for (unsigned k = 1; n.back() < ipow(pp.p, pp.e); ++k) {
      const u64 pk = ipow(pp.p, k);
      u64 cnt = 0;
      for (u64 o : orders) {
        u64 v = 1;
        while (o % pp.p == 0) {
          o /= pp.p;
          v *= pp.p;
        }
        if (o == 1 && pk % v == 0) ++cnt;
      }
      n.push_back(cnt);
    }
    std::vector<unsigned> at_least;
    for (std::size_t k = 1; k < n.size(); ++k) {
      unsigned r = 0;
      for (u64 ratio = n[k] / n[k - 1]; ratio > 1; ratio /= pp.p) ++r;
      at_least.push_back(r);
    }
    std::vector<unsigned> exps;  // descending
    for (std::size_t k = at_least.size(); k-- > 0;) {
      const unsigned next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
      for (unsigned c = 0; c < at_least[k] - next; ++c) exps.push_back(static_cast<unsigned>(k + 1));
    }
    parts.push_back(std::move(exps));
    primes.push_back(pp.p);
  }
  std::size_t rank = 0;
  for (const auto& e : parts) rank = std::max(rank, e.size());
  std::vector<u64> divs(rank, 1);  // divs[0] largest
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = 0; j < parts[i].size(); ++j) divs[j] *= ipow(primes[i], parts[i][j]);
  }
  std::reverse(divs.begin(), divs.end());
  return divs;
}

}  // namespace torsion
