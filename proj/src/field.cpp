#include "ssg/field.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ssg/errors.hpp"

namespace ssg {

namespace {
std::atomic<u64> g_seed{0x5eed'2020'0b01'aULL};
}

void set_global_seed(u64 seed) { g_seed.store(seed); }
u64 global_seed() { return g_seed.load(); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// F_p

PrimeField::PrimeField(u32 p) : p_(p) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("modulus " + std::to_string(p) + " is not an odd prime");
  if (p >= (u32{1} << 31)) throw PreconditionError("modulus must be below 2^31");
}

u32 PrimeField::pow(u32 a, u64 e) const {
  u64 r = 1, b = a % p_;
  while (e) {
    if (e & 1) r = r * b % p_;
    b = b * b % p_;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

u32 PrimeField::inv(u32 a) const {
  if (a % p_ == 0) throw PreconditionError("inverse of zero");
  return pow(a, p_ - 2);
}

u32 PrimeField::from_int(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<u32>(r);
}

bool PrimeField::is_square(u32 a) const { return a % p_ == 0 || pow(a, (p_ - 1) / 2) == 1; }

std::optional<u32> PrimeField::sqrt(u32 a) const {
  a %= p_;
  if (a == 0) return 0u;
  if (!is_square(a)) return std::nullopt;
  // Tonelli-Shanks
  u64 q = p_ - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  u32 z = 2;
  while (is_square(z)) ++z;
  u32 m = s, c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
  while (t != 1) {
    u32 i = 0, tt = t;
    while (tt != 1) {
      tt = mul(tt, tt);
      ++i;
    }
    u32 b = c;
    for (u32 j = 0; j + i + 1 < m; ++j) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return std::min(r, neg(r));
}

// ---------------------------------------------------------------------------
// F_{p^2}

QuadExtField QuadExtField::build(u32 p) {
  if (p < 7 || !is_prime(p))
    throw PreconditionError("p = " + std::to_string(p) + " must be a prime >= 7 (characteristic 2, 3, 5 excluded)");
  PrimeField fp(p);
  u32 n = 2;
  while (fp.is_square(n)) ++n;
  return QuadExtField(fp, n);
}

Fp2 QuadExtField::inv(Fp2 a) const {
  const u32 norm = fp_.sub(fp_.mul(a.c0, a.c0), fp_.mul(n_, fp_.mul(a.c1, a.c1)));
  const u32 ni = fp_.inv(norm);
  return {fp_.mul(a.c0, ni), fp_.mul(fp_.neg(a.c1), ni)};
}

Fp2 QuadExtField::pow(Fp2 a, u64 e) const {
  Fp2 r{1, 0};
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Extension registry

namespace {

using Fp2Vec = std::vector<Fp2>;

void trim(const QuadExtField&, Fp2Vec& v) {
  while (!v.empty() && v.back() == Fp2{}) v.pop_back();
}

}  // namespace

struct ExtFieldRegistry {
  std::mutex mu;
  std::map<std::pair<u32, int>, std::shared_ptr<ExtField>> fields;
  std::map<std::pair<const ExtField*, const ExtField*>, Gf> embeddings;

  static ExtFieldRegistry& instance() {
    static ExtFieldRegistry r;
    return r;
  }

  static std::shared_ptr<ExtField> make(QuadExtField quad, int degree, Fp2Vec modulus) {
    std::shared_ptr<ExtField> f(new ExtField(quad, degree, std::move(modulus)));
    f->self_ = f;
    return f;
  }
};

std::shared_ptr<const ExtField> ExtField::base_field(u32 p) { return extension(p, 1); }

std::shared_ptr<const ExtField> ExtField::extension(u32 p, int degree) {
  if (degree < 1 || degree > kMaxExtDegree)
    throw UnsupportedError("extension degree " + std::to_string(degree) + " outside 1..6");
  auto& reg = ExtFieldRegistry::instance();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.fields.find({p, degree});
    if (it != reg.fields.end()) return it->second;
  }
  if (degree == 1) {
    auto f = ExtFieldRegistry::make(QuadExtField::build(p), 1, {Fp2{0, 0}, Fp2{1, 0}});
    std::lock_guard lock(reg.mu);
    return reg.fields.emplace(std::pair{p, 1}, f).first->second;
  }
  auto base = base_field(p);
  // Deterministic search for a monic irreducible modulus. The order of
  // candidates is fixed so field encodings never depend on runtime config.
  std::mt19937_64 rng(0x6d6f64756c7573ULL ^ (u64{p} << 8) ^ static_cast<u64>(degree));
  for (;;) {
    std::vector<Gf> c;
    for (int i = 0; i < degree; ++i) c.push_back(base->random(rng));
    c.push_back(base->one());
    if (c[0].is_zero()) continue;
    Poly m(base.get(), c);
    if (!is_irreducible(m)) continue;
    Fp2Vec mod;
    for (const auto& x : m.coeffs()) mod.push_back(x.base_value());
    auto f = ExtFieldRegistry::make(base->quad(), degree, std::move(mod));
    std::lock_guard lock(reg.mu);
    return reg.fields.emplace(std::pair{p, degree}, f).first->second;
  }
}

BigInt ExtField::order() const {
  BigInt q = BigInt(p()) * p();
  BigInt r = 1;
  for (int i = 0; i < degree_; ++i) r *= q;
  return r;
}

Gf ExtField::zero() const { return Gf(this); }

Gf ExtField::one() const {
  Gf g(this);
  g.coord(0) = Fp2{1, 0};
  return g;
}

Gf ExtField::from_int(long long v) const { return from_fp2(quad_.from_int(v)); }

Gf ExtField::from_fp2(Fp2 v) const {
  Gf g(this);
  g.coord(0) = v;
  return g;
}

Gf ExtField::generator() const {
  Gf g(this);
  if (degree_ > 1) g.coord(1) = Fp2{1, 0};
  return g;
}

Gf ExtField::random(std::mt19937_64& rng) const {
  Gf g(this);
  std::uniform_int_distribution<u32> d(0, p() - 1);
  for (int i = 0; i < degree_; ++i) g.coord(i) = Fp2{d(rng), d(rng)};
  return g;
}

Gf ExtField::embedding_image(const ExtField& sub) const {
  if (degree_ % sub.degree() != 0 || sub.p() != p())
    throw InvariantError("field of degree " + std::to_string(sub.degree()) + " does not embed in degree " +
                         std::to_string(degree_));
  auto& reg = ExtFieldRegistry::instance();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.embeddings.find({&sub, this});
    if (it != reg.embeddings.end()) return it->second;
  }
  // Root of sub's modulus (coefficients in F_{p^2}) inside this field.
  std::vector<Gf> c;
  for (const auto& x : sub.modulus()) c.push_back(from_fp2(x));
  RootSet rs = find_roots(Poly(this, c));
  SSG_CHECK(rs.field.get() == this, "embedding root escaped target field");
  Gf img = rs.roots.front().first;
  std::lock_guard lock(reg.mu);
  reg.embeddings.emplace(std::pair{&sub, this}, img);
  return img;
}

// ---------------------------------------------------------------------------
// Gf

bool Gf::is_one() const {
  if (c_[0] != Fp2{1, 0}) return false;
  for (int i = 1; i < kMaxExtDegree; ++i)
    if (c_[i] != Fp2{}) return false;
  return true;
}

Fp2 Gf::base_value() const {
  SSG_CHECK(in_base(), "element " + to_string() + " does not lie in F_{p^2}");
  return c_[0];
}

Gf Gf::operator-() const {
  Gf r(f_);
  const auto& q = f_->quad_;
  for (int i = 0; i < f_->degree_; ++i) r.c_[i] = q.neg(c_[i]);
  return r;
}

Gf& Gf::operator+=(const Gf& o) {
  if (!f_) f_ = o.f_;
  const auto& q = f_->quad_;
  for (int i = 0; i < f_->degree_; ++i) c_[i] = q.add(c_[i], o.c_[i]);
  return *this;
}

Gf& Gf::operator-=(const Gf& o) {
  if (!f_) f_ = o.f_;
  const auto& q = f_->quad_;
  for (int i = 0; i < f_->degree_; ++i) c_[i] = q.sub(c_[i], o.c_[i]);
  return *this;
}

Gf& Gf::operator*=(const Gf& o) {
  if (!f_) f_ = o.f_;
  const auto& q = f_->quad_;
  const int k = f_->degree_;
  if (k == 1) {
    c_[0] = q.mul(c_[0], o.c_[0]);
    return *this;
  }
  std::array<Fp2, 2 * kMaxExtDegree> t{};
  for (int i = 0; i < k; ++i) {
    if (c_[i] == Fp2{}) continue;
    for (int j = 0; j < k; ++j) t[i + j] = q.add(t[i + j], q.mul(c_[i], o.c_[j]));
  }
  const auto& m = f_->modulus_;
  for (int i = 2 * k - 2; i >= k; --i) {
    if (t[i] == Fp2{}) continue;
    const Fp2 lead = t[i];
    for (int j = 0; j < k; ++j) t[i - k + j] = q.sub(t[i - k + j], q.mul(lead, m[j]));
    t[i] = Fp2{};
  }
  for (int i = 0; i < k; ++i) c_[i] = t[i];
  return *this;
}

Gf Gf::inv() const {
  if (is_zero()) throw PreconditionError("inverse of zero in F_{p^" + std::to_string(2 * degree()) + "}");
  const auto& q = f_->quad_;
  if (f_->degree_ == 1) {
    Gf r(f_);
    r.c_[0] = q.inv(c_[0]);
    return r;
  }
  // Extended Euclid on F_{p^2}[z]: find s with s*a = 1 mod m.
  Fp2Vec r0(f_->modulus_.begin(), f_->modulus_.end());
  Fp2Vec r1(c_.begin(), c_.begin() + f_->degree_);
  trim(q, r1);
  Fp2Vec s0, s1{Fp2{1, 0}};
  auto sub_mul_shift = [&](Fp2Vec& a, const Fp2Vec& b, Fp2 c, std::size_t shift) {
    if (a.size() < b.size() + shift) a.resize(b.size() + shift);
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = q.sub(a[i + shift], q.mul(c, b[i]));
  };
  while (!r1.empty()) {
    // r0 = r0 mod r1, s0 -= quotient * s1
    const Fp2 li = q.inv(r1.back());
    while (r0.size() >= r1.size() && !r0.empty()) {
      const std::size_t shift = r0.size() - r1.size();
      const Fp2 c = q.mul(r0.back(), li);
      sub_mul_shift(r0, r1, c, shift);
      sub_mul_shift(s0, s1, c, shift);
      trim(q, r0);
    }
    trim(q, s0);
    std::swap(r0, r1);
    std::swap(s0, s1);
  }
  // r0 is a nonzero constant
  SSG_CHECK(r0.size() == 1, "modulus not irreducible");
  const Fp2 ci = q.inv(r0[0]);
  Gf r(f_);
  for (std::size_t i = 0; i < s0.size(); ++i) r.c_[i] = q.mul(s0[i], ci);
  return r;
}

Gf Gf::pow(u64 e) const {
  Gf r = f_->one(), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Gf Gf::pow(const BigInt& e) const {
  Gf r = f_->one();
  if (e == 0) return r;
  const auto top = boost::multiprecision::msb(e);
  for (auto i = static_cast<long>(top); i >= 0; --i) {
    r *= r;
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r *= *this;
  }
  return r;
}

std::vector<u32> Gf::encode() const {
  std::vector<u32> out;
  for (int i = 0; i < degree(); ++i) {
    out.push_back(c_[i].c0);
    out.push_back(c_[i].c1);
  }
  return out;
}

std::string Gf::to_string() const {
  std::ostringstream os;
  auto one = [&](Fp2 x) { os << x.c0 << (x.c1 ? "+" + std::to_string(x.c1) + "t" : ""); };
  if (degree() <= 1) {
    one(c_[0]);
  } else {
    os << "[";
    for (int i = 0; i < degree(); ++i) {
      if (i) os << ", ";
      one(c_[i]);
    }
    os << "]";
  }
  return os.str();
}

std::strong_ordering operator<=>(const Gf& a, const Gf& b) {
  for (int i = 0; i < kMaxExtDegree; ++i) {
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Gf embed(const Gf& x, const ExtField& target) {
  if (x.field() == &target) return x;
  if (x.in_base()) return target.from_fp2(x.coords()[0]);
  const Gf img = target.embedding_image(*x.field());
  Gf r = target.zero(), pw = target.one();
  for (int i = 0; i < x.degree(); ++i) {
    r += target.from_fp2(x.coords()[i]) * pw;
    pw *= img;
  }
  return r;
}

Gf descend(const Gf& x) {
  auto base = ExtField::base_field(x.field()->p());
  return base->from_fp2(x.base_value());
}

bool is_square(const Gf& a) {
  if (a.is_zero()) return true;
  return a.pow((a.field()->order() - 1) / 2).is_one();
}

std::optional<Gf> square_root(const Gf& a) {
  if (a.is_zero()) return a;
  if (!is_square(a)) return std::nullopt;
  const ExtField* f = a.field();
  Poly g(f, {-a, f->zero(), f->one()});
  RootSet rs = find_roots(g);
  SSG_CHECK(rs.field.get() == f, "square root left its field");
  return rs.roots.front().first;  // sorted: least representative first
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(const ExtField* f, std::vector<Gf> coeffs) : f_(f), c_(std::move(coeffs)) {
  for (auto& c : c_)
    if (!c.field()) c = Gf(f_);
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::x(const ExtField* f) { return Poly(f, {f->zero(), f->one()}); }

Poly Poly::constant(const Gf& c) { return Poly(c.field(), {c}); }

Poly Poly::from_ints(const ExtField* f, const std::vector<long long>& coeffs) {
  std::vector<Gf> c;
  for (auto v : coeffs) c.push_back(f->from_int(v));
  return Poly(f, std::move(c));
}

Poly Poly::from_roots(const ExtField* f, const std::vector<Gf>& roots) {
  Poly r = constant(f->one());
  for (const auto& x : roots) r = r * Poly(f, {-x, f->one()});
  return r;
}

Poly Poly::monic() const {
  if (c_.empty() || c_.back().is_one()) return *this;
  return *this * c_.back().inv();
}

Poly Poly::derivative() const {
  std::vector<Gf> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(c_[i] * i);
  return Poly(f_, std::move(d));
}

Gf Poly::eval(const Gf& x) const {
  Gf r = f_->zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (!f_) f_ = o.f_;
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Gf(f_));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (!f_) f_ = o.f_;
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Gf(f_));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  const ExtField* f = a.f_ ? a.f_ : b.f_;
  if (a.is_zero() || b.is_zero()) return Poly(f);
  std::vector<Gf> r(a.c_.size() + b.c_.size() - 1, Gf(f));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(f, std::move(r));
}

Poly operator*(Poly a, const Gf& s) {
  for (auto& c : a.c_) c *= s;
  a.trim();
  return a;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  if (d.is_zero()) throw PreconditionError("polynomial division by zero");
  Poly r(*this);
  if (r.degree() < d.degree()) return {Poly(f_ ? f_ : d.f_), r};
  const Gf li = d.leading().inv();
  std::vector<Gf> q(r.degree() - d.degree() + 1, Gf(d.f_));
  for (int i = r.degree(); i >= d.degree(); --i) {
    const Gf c = r.c_[i] * li;
    q[i - d.degree()] = c;
    if (c.is_zero()) continue;
    for (int j = 0; j <= d.degree(); ++j) r.c_[i - d.degree() + j] -= c * d.c_[j];
  }
  r.trim();
  return {Poly(d.f_, std::move(q)), r};
}

Poly Poly::powmod(const BigInt& e, const Poly& mod) const {
  Poly base = *this % mod;
  Poly r = constant(f_->one()) % mod;
  if (e == 0) return r;
  const auto top = boost::multiprecision::msb(e);
  for (auto i = static_cast<long>(top); i >= 0; --i) {
    r = (r * r) % mod;
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r = (r * base) % mod;
  }
  return r;
}

Poly Poly::embed_into(const ExtField& target) const {
  std::vector<Gf> c;
  for (const auto& x : c_) c.push_back(embed(x, target));
  return Poly(&target, std::move(c));
}

bool Poly::in_base() const {
  return std::all_of(c_.begin(), c_.end(), [](const Gf& x) { return x.in_base(); });
}

Poly Poly::descend() const {
  auto base = ExtField::base_field(f_->p());
  std::vector<Gf> c;
  for (const auto& x : c_) c.push_back(base->from_fp2(x.base_value()));
  return Poly(base.get(), std::move(c));
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[i].to_string() << ")";
    if (i > 0) os << "*x" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return os.str();
}

Poly poly_gcd(const Poly& f, const Poly& g) {
  if (f.is_zero() && g.is_zero()) throw PreconditionError("gcd(0, 0) is undefined");
  Poly a = f, b = g;
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::pair<int, Poly>> distinct_degree_factors(const Poly& f) {
  std::vector<std::pair<int, Poly>> out;
  const ExtField* K = f.field();
  const BigInt q = K->order();
  Poly g = f.monic();
  const Poly x = Poly::x(K);
  Poly h = x % g;
  for (int d = 1; 2 * d <= g.degree(); ++d) {
    h = h.powmod(q, g);
    Poly fac = poly_gcd(g, h - x);
    if (fac.degree() > 0) {
      out.emplace_back(d, fac);
      g = g / fac;
      h = h % g;
    }
  }
  if (g.degree() > 0) out.emplace_back(g.degree(), g);
  return out;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  auto parts = distinct_degree_factors(f);
  return parts.size() == 1 && parts[0].first == f.degree();
}

std::vector<Gf> RootSet::distinct() const {
  std::vector<Gf> out;
  for (const auto& [r, m] : roots) out.push_back(r);
  return out;
}

namespace {

// g monic squarefree, splits into linear factors over its field.
void split_linear(const Poly& g, const BigInt& half, std::mt19937_64& rng, std::vector<Gf>& out) {
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(-(g.coeff(0) / g.coeff(1)));
    return;
  }
  const ExtField* K = g.field();
  for (;;) {
    Poly probe(K, {K->random(rng), K->one()});
    Poly h = probe.powmod(half, g) - Poly::constant(K->one());
    if (h.is_zero()) continue;
    Poly d = poly_gcd(g, h);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear(d, half, rng, out);
      split_linear((g / d).monic(), half, rng, out);
      return;
    }
  }
}

}  // namespace

RootSet find_roots(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("find_roots of the zero polynomial");
  const ExtField* K = f.field();
  RootSet rs;
  if (f.degree() == 0) {
    rs.field = K->self();
    return rs;
  }
  if (f.degree() >= static_cast<int>(K->p()))
    throw UnsupportedError("root finding requires degree below the characteristic");

  const Poly fm = f.monic();
  const Poly sqfree = (fm / poly_gcd(fm, fm.derivative())).monic();

  int lcm = 1;
  for (const auto& [d, part] : distinct_degree_factors(sqfree)) lcm = std::lcm(lcm, d);
  const int target_degree = K->degree() * lcm;
  if (target_degree > kMaxExtDegree)
    throw UnsupportedError("splitting field of degree " + std::to_string(target_degree) + " over F_{p^2}");

  std::shared_ptr<const ExtField> T = lcm == 1 ? K->self() : ExtField::extension(K->p(), target_degree);
  rs.field = T;
  const Poly gT = sqfree.embed_into(*T);
  const Poly fT = fm.embed_into(*T);

  std::mt19937_64 rng(global_seed());
  std::vector<Gf> roots;
  split_linear(gT, (T->order() - 1) / 2, rng, roots);
  std::sort(roots.begin(), roots.end());
  for (const auto& r : roots) {
    int mult = 0;
    Poly cur = fT;
    const Poly lin(T.get(), {-r, T->one()});
    for (;;) {
      auto [q, rem] = cur.divmod(lin);
      if (!rem.is_zero()) break;
      ++mult;
      cur = std::move(q);
    }
    rs.roots.emplace_back(r, mult);
  }
  return rs;
}

}  // namespace ssg

namespace ssg {

std::shared_ptr<const ExtField> common_field(const ExtField& a, const ExtField& b) {
  if (a.p() != b.p()) throw PreconditionError("fields of different characteristic");
  return ExtField::extension(a.p(), std::lcm(a.degree(), b.degree()));
}

}  // namespace ssg
