#include "torsion/characters.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "torsion/error.hpp"

namespace torsion {

// ---------------------------------------------------------------------------
// UnityValue

UnityValue UnityValue::root(u64 num, u64 den) {
  if (den == 0) throw Error(Errc::InvalidArgument, "root of unity needs positive level");
  num %= den;
  const u64 g = std::gcd(num, den);
  UnityValue v;
  v.num_ = num / g;
  v.den_ = den / g;
  return v;
}

UnityValue UnityValue::operator*(const UnityValue& o) const {
  if (is_zero() || o.is_zero()) return zero();
  const u64 l = lcm_u64(den_, o.den_);
  const u64 n = (static_cast<u128>(num_) * (l / den_) + static_cast<u128>(o.num_) * (l / o.den_)) % l;
  return root(n, l);
}

UnityValue UnityValue::conj() const {
  if (is_zero()) return zero();
  return root(den_ - num_, den_);
}

UnityValue UnityValue::pow(u64 k) const {
  if (is_zero()) return k == 0 ? one() : zero();
  return root(static_cast<u64>(static_cast<u128>(num_) * k % den_), den_);
}

std::complex<double> UnityValue::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  switch (den_) {
    case 1: return {1.0, 0.0};
    case 2: return {-1.0, 0.0};
    case 4: return num_ == 1 ? std::complex<double>{0.0, 1.0} : std::complex<double>{0.0, -1.0};
    default: break;
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
  return {std::cos(angle), std::sin(angle)};
}

int UnityValue::to_sign() const {
  if (is_zero()) return 0;
  if (den_ == 1) return 1;
  if (den_ == 2) return -1;
  throw Error(Errc::InvalidArgument, "value " + str() + " is not real");
}

std::string UnityValue::str() const {
  if (is_zero()) return "0";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

// ---------------------------------------------------------------------------
// Cyclotomic arithmetic

namespace {

std::mutex g_cyclo_mutex;
std::map<u64, std::vector<i64>> g_cyclo_cache;

// Exact division of a by monic b; returns quotient.
std::vector<i64> divide_exact(std::vector<i64> a, const std::vector<i64>& b) {
  const std::size_t db = b.size() - 1;
  std::vector<i64> q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    const i64 c = a[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  return q;
}

}  // namespace

const std::vector<i64>& cyclotomic_polynomial(u64 m) {
  if (m == 0) throw Error(Errc::InvalidArgument, "cyclotomic level must be positive");
  {
    std::lock_guard lock(g_cyclo_mutex);
    auto it = g_cyclo_cache.find(m);
    if (it != g_cyclo_cache.end()) return it->second;
  }
  std::vector<i64> poly(m + 1, 0);
  poly[0] = -1;
  poly[m] = 1;
  for (u64 d : divisors(factorize(m))) {
    if (d == m) continue;
    poly = divide_exact(std::move(poly), cyclotomic_polynomial(d));
  }
  std::lock_guard lock(g_cyclo_mutex);
  return g_cyclo_cache.emplace(m, std::move(poly)).first->second;
}

CyclotomicSum::CyclotomicSum(u64 m) : m_(m), coeff_(m, 0) {
  if (m == 0) throw Error(Errc::InvalidArgument, "cyclotomic level must be positive");
}

void CyclotomicSum::add(const UnityValue& v, i64 count) {
  if (v.is_zero()) return;
  if (m_ % v.denominator() != 0) {
    throw Error(Errc::InvalidArgument, "value " + v.str() + " outside Q(zeta_" + std::to_string(m_) + ")");
  }
  coeff_[v.numerator() * (m_ / v.denominator())] += count;
}

CyclotomicSum& CyclotomicSum::operator+=(const CyclotomicSum& o) {
  if (o.m_ != m_) throw Error(Errc::InvalidArgument, "cyclotomic level mismatch");
  for (u64 k = 0; k < m_; ++k) coeff_[k] += o.coeff_[k];
  return *this;
}

std::vector<i64> CyclotomicSum::reduced() const {
  const auto& phi = cyclotomic_polynomial(m_);
  const std::size_t deg = phi.size() - 1;
  std::vector<i64> r = coeff_;
  for (std::size_t i = r.size(); i-- > deg;) {
    const i64 c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  r.resize(deg);
  return r;
}

bool CyclotomicSum::is_zero() const {
  const auto r = reduced();
  return std::all_of(r.begin(), r.end(), [](i64 c) { return c == 0; });
}

std::complex<double> CyclotomicSum::to_complex() const {
  std::complex<double> s{0.0, 0.0};
  for (u64 k = 0; k < m_; ++k) {
    if (coeff_[k] != 0) s += static_cast<double>(coeff_[k]) * UnityValue::root(k, m_).to_complex();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Kronecker symbol

int kronecker(i64 a, i64 b) {
  static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (b & 1) == 0) return 0;
  int v = 0;
  while ((b & 1) == 0) {
    ++v;
    b /= 2;
  }
  int k = (v % 2 == 0) ? 1 : tab2[a & 7];
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  while (true) {
    if (a == 0) return b > 1 ? 0 : k;
    v = 0;
    while ((a & 1) == 0) {
      ++v;
      a /= 2;
    }
    if (v % 2 == 1) k *= tab2[b & 7];
    if (a & b & 2) k = -k;
    const i64 r = a < 0 ? -a : a;
    a = b % r;
    b = r;
  }
}

bool is_fundamental_discriminant(i64 d) {
  if (d == 0 || d == 1) return false;
  const i64 r = floor_mod(d, 4);
  const u64 ad = static_cast<u64>(d < 0 ? -d : d);
  if (r == 1) return is_squarefree(ad);
  if (r != 0) return false;
  const i64 m = d / 4;
  const i64 rm = floor_mod(m, 4);
  if (rm != 2 && rm != 3) return false;
  return is_squarefree(static_cast<u64>(m < 0 ? -m : m));
}

// ---------------------------------------------------------------------------
// Local discrete log tables

class LocalLogTable {
 public:
  static constexpr u64 kMaxSize = u64{1} << 27;

  LocalLogTable(u64 p, unsigned e) : p_(p), e_(e), pe_(ipow(p, e)) {
    if (pe_ > kMaxSize) {
      throw Error(Errc::ModulusTooLarge, "prime power " + std::to_string(pe_) + " too large for log tables");
    }
    log_.assign(pe_, -1);
    if (p == 2) {
      if (e == 1) {
        log_[1] = 0;
      } else if (e == 2) {
        log_[1] = 0;
        log_[3] = 1;
      } else {
        const u64 half = pe_ >> 2;  // order of 5
        u64 x = 1;
        for (u64 v = 0; v < half; ++v) {
          log_[x] = static_cast<std::int64_t>(v);                // (+1) * 5^v
          log_[pe_ - x] = static_cast<std::int64_t>(half + v);   // (-1) * 5^v
          x = x * 5 % pe_;
        }
      }
      generator_ = (e == 2) ? 3 : (e >= 3 ? 5 : 1);
    } else {
      generator_ = primitive_root(p, e);
      const u64 phi = (p - 1) * ipow(p, e - 1);
      u64 x = 1;
      for (u64 k = 0; k < phi; ++k) {
        log_[x] = static_cast<std::int64_t>(k);
        x = mul_mod(x, generator_, pe_);
      }
    }
  }

  u64 p() const { return p_; }
  unsigned e() const { return e_; }
  u64 pe() const { return pe_; }
  /// Fixed generator (5 for 2^e with e >= 3, 3 = -1 for e = 2).
  u64 generator() const { return generator_; }
  bool two_generators() const { return p_ == 2 && e_ >= 3; }
  /// Order of the cyclic factor indexed by LocalIndex::a.
  u64 order_a() const {
    if (p_ == 2) return e_ == 1 ? 1 : 2;
    return (p_ - 1) * ipow(p_, e_ - 1);
  }
  /// Order of the factor indexed by LocalIndex::b (1 unless 2^e, e >= 3).
  u64 order_b() const { return two_generators() ? (pe_ >> 2) : 1; }

  /// Log of x (mod pe): for cyclic groups the exponent of the generator; for
  /// 2^e (e >= 3) packed as u * 2^{e-2} + v with x = (-1)^u 5^v.  -1 if not a unit.
  std::int64_t log(u64 x) const { return log_[x % pe_]; }
  u64 log_a(u64 x) const {
    const auto l = log(x);
    return two_generators() ? static_cast<u64>(l) / order_b() : static_cast<u64>(l);
  }
  u64 log_b(u64 x) const { return two_generators() ? static_cast<u64>(log(x)) % order_b() : 0; }

 private:
  u64 p_;
  unsigned e_;
  u64 pe_;
  u64 generator_ = 1;
  std::vector<std::int64_t> log_;
};

namespace {

std::mutex g_table_mutex;
std::map<u64, std::shared_ptr<const LocalLogTable>> g_tables;

std::shared_ptr<const LocalLogTable> local_table(u64 p, unsigned e) {
  const u64 key = ipow(p, e);
  {
    std::lock_guard lock(g_table_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end()) return it->second;
  }
  auto table = std::make_shared<const LocalLogTable>(p, e);
  std::lock_guard lock(g_table_mutex);
  return g_tables.emplace(key, std::move(table)).first->second;
}

// n with n = x mod pe and n = 1 mod rest, where gcd(pe, rest) = 1.
u64 crt_lift(u64 x, u64 pe, u64 rest) {
  if (rest == 1) return x % pe;
  const i64 inv = inverse_mod(static_cast<i64>(rest % pe), static_cast<i64>(pe));
  const i128 t = static_cast<i128>(floor_mod(static_cast<i64>(x % pe) - 1, static_cast<i64>(pe))) * inv % static_cast<i64>(pe);
  return static_cast<u64>(1 + static_cast<i128>(rest) * t);
}

// Order of exp(2 pi i a / n).
u64 root_order(u64 a, u64 n) { return n / std::gcd(a % n, n); }

unsigned valuation(u64 x, u64 p) {
  unsigned v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter::DirichletCharacter() { finalize(); }

DirichletCharacter::DirichletCharacter(u64 modulus, std::vector<LocalIndex> indices)
    : modulus_(modulus), indices_(std::move(indices)) {
  if (modulus == 0) throw Error(Errc::InvalidArgument, "modulus must be positive");
  if (modulus > 1) factors_ = factorize(modulus);
  if (indices_.size() != factors_.size()) {
    throw Error(Errc::InvalidArgument, "need one local index per prime factor of " + std::to_string(modulus));
  }
  finalize();
}

void DirichletCharacter::finalize() {
  components_.clear();
  order_ = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& pp = factors_[i];
    auto table = local_table(pp.p, pp.e);
    auto& idx = indices_[i];
    idx.a %= table->order_a();
    idx.b %= table->order_b();
    order_ = lcm_u64(order_, lcm_u64(root_order(idx.a, table->order_a()), root_order(idx.b, table->order_b())));
    components_.push_back({pp.p, pp.e, pp.value(), std::move(table), 0, 0});
  }
  conductor_ = 1;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    auto& c = components_[i];
    const auto& idx = indices_[i];
    const u64 na = c.logs->order_a(), nb = c.logs->order_b();
    const u64 oa = root_order(idx.a, na), ob = root_order(idx.b, nb);
    c.mult_a = idx.a / (na / oa) * (order_ / oa) % order_;
    c.mult_b = idx.b / (nb / ob) * (order_ / ob) % order_;

    unsigned cond_exp = 0;
    if (c.p == 2) {
      if (c.e == 2 && idx.a != 0) cond_exp = 2;
      if (c.e >= 3) {
        if (idx.b != 0) {
          cond_exp = c.e - valuation(idx.b, 2);
        } else if (idx.a != 0) {
          cond_exp = 2;
        }
      }
    } else if (idx.a != 0) {
      cond_exp = std::max<unsigned>(1, c.e - std::min(valuation(idx.a, c.p), c.e - 1));
    }
    conductor_ *= ipow(c.p, cond_exp);
  }
  odd_ = modulus_ > 2 && exponent(static_cast<i64>(modulus_) - 1) != 0;
}

DirichletCharacter DirichletCharacter::principal(u64 modulus) {
  const std::size_t k = modulus > 1 ? factorize(modulus).size() : 0;
  return DirichletCharacter(modulus, std::vector<LocalIndex>(k));
}

DirichletCharacter DirichletCharacter::from_index(u64 modulus, u64 index) {
  const auto f = modulus > 1 ? factorize(modulus) : Factorization{};
  std::vector<LocalIndex> idx(f.size());
  for (std::size_t i = f.size(); i-- > 0;) {
    const u64 radix = euler_phi(Factorization{f[i]});
    u64 digit = index % radix;
    index /= radix;
    if (f[i].p == 2 && f[i].e >= 3) {
      const u64 nb = f[i].value() >> 2;
      idx[i] = {digit / nb, digit % nb};
    } else {
      idx[i] = {digit, 0};
    }
  }
  if (index != 0) throw Error(Errc::InvalidArgument, "character index out of range for modulus " + std::to_string(modulus));
  return DirichletCharacter(modulus, std::move(idx));
}

u64 DirichletCharacter::index() const {
  u64 index = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& t = *components_[i].logs;
    const u64 radix = t.order_a() * t.order_b();
    index = index * radix + indices_[i].a * t.order_b() + indices_[i].b;
  }
  return index;
}

DirichletCharacter DirichletCharacter::from_function(u64 modulus, const std::function<UnityValue(u64)>& values) {
  const auto f = modulus > 1 ? factorize(modulus) : Factorization{};
  std::vector<LocalIndex> idx(f.size());
  auto index_of = [](const UnityValue& v, u64 n) -> u64 {
    if (v.is_zero() || n % v.denominator() != 0) {
      throw Error(Errc::InvalidArgument, "function value " + v.str() + " incompatible with local group");
    }
    return v.numerator() * (n / v.denominator());
  };
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto table = local_table(f[i].p, f[i].e);
    const u64 pe = f[i].value(), rest = modulus / pe;
    if (f[i].p == 2) {
      if (f[i].e >= 2) idx[i].a = index_of(values(crt_lift(pe - 1, pe, rest)), 2);
      if (f[i].e >= 3) idx[i].b = index_of(values(crt_lift(5, pe, rest)), table->order_b());
    } else {
      idx[i].a = index_of(values(crt_lift(table->generator(), pe, rest)), table->order_a());
    }
  }
  return DirichletCharacter(modulus, std::move(idx));
}

i64 DirichletCharacter::exponent(i64 n) const {
  const u64 r = static_cast<u64>(floor_mod(n, static_cast<i64>(modulus_)));
  u128 acc = 0;
  for (const auto& c : components_) {
    const auto l = c.logs->log(r % c.pe);
    if (l < 0) return -1;
    if (c.logs->two_generators()) {
      const u64 nb = c.logs->order_b();
      acc += static_cast<u128>(c.mult_a) * (static_cast<u64>(l) / nb) + static_cast<u128>(c.mult_b) * (static_cast<u64>(l) % nb);
    } else {
      acc += static_cast<u128>(c.mult_a) * static_cast<u64>(l);
    }
  }
  return static_cast<i64>(acc % order_);
}

UnityValue DirichletCharacter::operator()(i64 n) const {
  const i64 k = exponent(n);
  if (k < 0) return UnityValue::zero();
  return UnityValue::root(static_cast<u64>(k), order_);
}

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<LocalIndex> idx = indices_;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& t = *components_[i].logs;
    idx[i].a = (t.order_a() - idx[i].a) % t.order_a();
    idx[i].b = (t.order_b() - idx[i].b) % t.order_b();
  }
  return DirichletCharacter(modulus_, std::move(idx));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
  if (o.modulus_ != modulus_) {
    const u64 l = lcm_u64(modulus_, o.modulus_);
    return induce(l) * o.induce(l);
  }
  std::vector<LocalIndex> idx = indices_;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i].a += o.indices_[i].a;
    idx[i].b += o.indices_[i].b;
  }
  return DirichletCharacter(modulus_, std::move(idx));
}

DirichletCharacter DirichletCharacter::induce(u64 modulus) const {
  if (modulus == 0 || modulus % modulus_ != 0) {
    throw Error(Errc::InvalidArgument, "cannot induce mod " + std::to_string(modulus_) + " to " + std::to_string(modulus));
  }
  const auto f = modulus > 1 ? factorize(modulus) : Factorization{};
  std::vector<LocalIndex> idx(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto it = std::find_if(components_.begin(), components_.end(), [&](const Component& c) { return c.p == f[i].p; });
    if (it == components_.end()) continue;
    const auto& own = indices_[static_cast<std::size_t>(it - components_.begin())];
    const unsigned e = it->e, big_e = f[i].e;
    if (f[i].p == 2) {
      if (e == 1) continue;
      idx[i].a = own.a;
      if (e >= 3) idx[i].b = own.b << (big_e - e);
    } else {
      const auto big = local_table(f[i].p, big_e);
      const u64 na = it->logs->order_a(), big_na = big->order_a();
      const u64 l = it->logs->log_a(big->generator());
      idx[i].a = static_cast<u64>(static_cast<u128>(own.a) * l % na * (big_na / na) % big_na);
    }
  }
  return DirichletCharacter(modulus, std::move(idx));
}

std::string DirichletCharacter::str() const {
  std::ostringstream os;
  os << "chi[" << modulus_ << "#" << index() << ", order " << order_ << ", conductor " << conductor_ << "]";
  return os.str();
}

std::vector<DirichletCharacter> enumerate_characters(u64 q, std::optional<u64> order_filter) {
  if (q == 0) throw Error(Errc::InvalidArgument, "modulus must be positive");
  const u64 count = euler_phi(q);
  std::vector<DirichletCharacter> out;
  for (u64 i = 0; i < count; ++i) {
    auto chi = DirichletCharacter::from_index(q, i);
    if (!order_filter || chi.order() == *order_filter) out.push_back(std::move(chi));
  }
  return out;
}

DirichletCharacter attach_quadratic(i64 discriminant) {
  if (!is_fundamental_discriminant(discriminant)) {
    throw Error(Errc::NotFundamental, std::to_string(discriminant) + " is not a fundamental discriminant");
  }
  const u64 q = static_cast<u64>(discriminant < 0 ? -discriminant : discriminant);
  return DirichletCharacter::from_function(q, [discriminant](u64 n) {
    const int k = kronecker(discriminant, static_cast<i64>(n));
    return k == 0 ? UnityValue::zero() : (k == 1 ? UnityValue::one() : UnityValue::root(1, 2));
  });
}

PrimitiveForm primitivize(const DirichletCharacter& chi) {
  const u64 f = chi.conductor();
  if (f == chi.modulus()) return {chi, f};
  const auto ff = f > 1 ? factorize(f) : Factorization{};
  std::vector<LocalIndex> idx(ff.size());
  const auto& own_f = chi.factorization();
  for (std::size_t i = 0; i < ff.size(); ++i) {
    auto it = std::find_if(own_f.begin(), own_f.end(), [&](const PrimePower& pp) { return pp.p == ff[i].p; });
    const auto& own = chi.local_indices()[static_cast<std::size_t>(it - own_f.begin())];
    const unsigned e = it->e, c = ff[i].e;
    if (ff[i].p == 2) {
      idx[i].a = own.a;
      if (c >= 3) idx[i].b = own.b >> (e - c);
    } else {
      const auto big = local_table(ff[i].p, e);
      const auto small = local_table(ff[i].p, c);
      const u64 na = big->order_a(), small_na = small->order_a();
      const u64 l = big->log_a(small->generator());
      idx[i].a = static_cast<u64>(static_cast<u128>(own.a) * l % na / (na / small_na));
    }
  }
  return {DirichletCharacter(f, std::move(idx)), f};
}

}  // namespace torsion
