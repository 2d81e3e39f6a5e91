#pragma once

// Exact arithmetic over F_p, F_{p^2} = F_p[t]/(t^2 - n) and extensions
// F_{p^2}[z]/(m(z)) of degree <= 6, plus univariate polynomials and root
// finding over those fields.

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ssg {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxExtDegree = 6;

/// Global seed feeding every randomized subroutine (splitting, walks).
void set_global_seed(u64 seed);
u64 global_seed();

bool is_prime(u64 n);

class PrimeField {
 public:
  explicit PrimeField(u32 p);

  u32 p() const { return p_; }
  u32 add(u32 a, u32 b) const {
    u32 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p_ - b; }
  u32 neg(u32 a) const { return a == 0 ? 0 : p_ - a; }
  u32 mul(u32 a, u32 b) const { return static_cast<u32>(u64{a} * b % p_); }
  u32 pow(u32 a, u64 e) const;
  u32 inv(u32 a) const;
  u32 from_int(long long v) const;
  bool is_square(u32 a) const;
  /// Least representative r with r^2 = a, if one exists.
  std::optional<u32> sqrt(u32 a) const;

 private:
  u32 p_;
};

/// c0 + c1*t with t^2 = n.
struct Fp2 {
  u32 c0 = 0;
  u32 c1 = 0;
  friend bool operator==(const Fp2&, const Fp2&) = default;
  friend auto operator<=>(const Fp2&, const Fp2&) = default;
};

class QuadExtField {
 public:
  /// Rejects composite p and p < 7.
  static QuadExtField build(u32 p);

  const PrimeField& base() const { return fp_; }
  u32 p() const { return fp_.p(); }
  u32 nonresidue() const { return n_; }

  Fp2 add(Fp2 a, Fp2 b) const { return {fp_.add(a.c0, b.c0), fp_.add(a.c1, b.c1)}; }
  Fp2 sub(Fp2 a, Fp2 b) const { return {fp_.sub(a.c0, b.c0), fp_.sub(a.c1, b.c1)}; }
  Fp2 neg(Fp2 a) const { return {fp_.neg(a.c0), fp_.neg(a.c1)}; }
  Fp2 mul(Fp2 a, Fp2 b) const {
    const u64 p = fp_.p();
    u64 r0 = (u64{a.c0} * b.c0 + (u64{a.c1} * b.c1 % p) * n_) % p;
    u64 r1 = (u64{a.c0} * b.c1 + u64{a.c1} * b.c0) % p;
    return {static_cast<u32>(r0), static_cast<u32>(r1)};
  }
  Fp2 inv(Fp2 a) const;
  Fp2 pow(Fp2 a, u64 e) const;
  /// x -> x^p, i.e. conjugation t -> -t.
  Fp2 frobenius(Fp2 a) const { return {a.c0, fp_.neg(a.c1)}; }
  Fp2 from_int(long long v) const { return {fp_.from_int(v), 0}; }

 private:
  QuadExtField(PrimeField fp, u32 n) : fp_(fp), n_(n) {}
  PrimeField fp_;
  u32 n_;
};

class Gf;
class Poly;

/// F_{p^2}[z]/(m(z)) with m monic irreducible of degree k; k = 1 is F_{p^2}.
/// Instances are interned per (p, k) so elements of equal fields compare.
class ExtField {
 public:
  static std::shared_ptr<const ExtField> base_field(u32 p);
  static std::shared_ptr<const ExtField> extension(u32 p, int degree);

  int degree() const { return degree_; }
  u32 p() const { return quad_.p(); }
  const QuadExtField& quad() const { return quad_; }
  /// Monic modulus, lowest coefficient first (size degree + 1).
  const std::vector<Fp2>& modulus() const { return modulus_; }
  BigInt order() const;

  Gf zero() const;
  Gf one() const;
  Gf from_int(long long v) const;
  Gf from_fp2(Fp2 v) const;
  /// The class of z (the adjoined root); equals t-free constant 0 for k = 1.
  Gf generator() const;
  Gf random(std::mt19937_64& rng) const;

  std::shared_ptr<const ExtField> self() const { return self_.lock(); }

  /// Image of the generator of `sub` inside this field (sub->degree | degree).
  Gf embedding_image(const ExtField& sub) const;

 private:
  ExtField(QuadExtField quad, int degree, std::vector<Fp2> modulus)
      : quad_(quad), degree_(degree), modulus_(std::move(modulus)) {}

  QuadExtField quad_;
  int degree_;
  std::vector<Fp2> modulus_;
  std::weak_ptr<const ExtField> self_;

  friend class Gf;
  friend struct ExtFieldRegistry;
};

/// Element of an ExtField. Holds a non-owning pointer to its field; fields
/// are interned for the process lifetime.
class Gf {
 public:
  Gf() = default;
  explicit Gf(const ExtField* f) : f_(f) {}

  const ExtField* field() const { return f_; }
  int degree() const { return f_ ? f_->degree_ : 0; }
  const std::array<Fp2, kMaxExtDegree>& coords() const { return c_; }
  Fp2& coord(int i) { return c_[i]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x.c0 || x.c1) return false;
    return true;
  }
  bool is_one() const;
  /// True when the element lies in the F_{p^2} subfield.
  bool in_base() const {
    for (int i = 1; i < kMaxExtDegree; ++i)
      if (c_[i].c0 || c_[i].c1) return false;
    return true;
  }
  Fp2 base_value() const;

  Gf operator-() const;
  Gf& operator+=(const Gf& o);
  Gf& operator-=(const Gf& o);
  Gf& operator*=(const Gf& o);
  Gf& operator/=(const Gf& o) { return *this *= o.inv(); }
  friend Gf operator+(Gf a, const Gf& b) { return a += b; }
  friend Gf operator-(Gf a, const Gf& b) { return a -= b; }
  friend Gf operator*(Gf a, const Gf& b) { return a *= b; }
  friend Gf operator/(Gf a, const Gf& b) { return a /= b; }
  friend Gf operator*(Gf a, long long k) { return a *= a.f_->from_int(k); }
  friend Gf operator*(long long k, Gf a) { return a *= a.f_->from_int(k); }

  Gf sqr() const { return *this * *this; }
  Gf inv() const;
  Gf pow(u64 e) const;
  Gf pow(const BigInt& e) const;
  Gf frobenius() const { return pow(u64{f_->p()}); }

  /// Little-endian coordinate vector of F_p residues (2 * degree entries).
  std::vector<u32> encode() const;
  std::string to_string() const;

  friend bool operator==(const Gf& a, const Gf& b) { return a.c_ == b.c_; }
  /// Canonical order: lexicographic on encode().
  friend std::strong_ordering operator<=>(const Gf& a, const Gf& b);

 private:
  const ExtField* f_ = nullptr;
  std::array<Fp2, kMaxExtDegree> c_{};
};

/// Lift x into `target`, which must contain x's field as a subfield.
Gf embed(const Gf& x, const ExtField& target);
/// Move an element known to lie in F_{p^2} into the base field context.
Gf descend(const Gf& x);

/// Least representative square root (by canonical order of r and -r).
std::optional<Gf> square_root(const Gf& a);
bool is_square(const Gf& a);

class Poly {
 public:
  Poly() = default;
  explicit Poly(const ExtField* f) : f_(f) {}
  Poly(const ExtField* f, std::vector<Gf> coeffs);

  static Poly x(const ExtField* f);
  static Poly constant(const Gf& c);
  static Poly from_ints(const ExtField* f, const std::vector<long long>& coeffs);
  /// prod (x - r_i)
  static Poly from_roots(const ExtField* f, const std::vector<Gf>& roots);

  const ExtField* field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Gf>& coeffs() const { return c_; }
  Gf coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : f_->zero(); }
  Gf leading() const { return c_.empty() ? f_->zero() : c_.back(); }

  Poly monic() const;
  Poly derivative() const;
  Gf eval(const Gf& x) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Gf& s);
  friend Poly operator*(const Gf& s, Poly a) { return std::move(a) * s; }
  Poly operator-() const;

  /// Euclidean division; divisor must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& d) const;
  friend Poly operator/(const Poly& a, const Poly& b) { return a.divmod(b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return a.divmod(b).second; }

  Poly powmod(const BigInt& e, const Poly& mod) const;
  Poly embed_into(const ExtField& target) const;
  /// True if every coefficient lies in F_{p^2}.
  bool in_base() const;
  Poly descend() const;

  std::string to_string() const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  const ExtField* f_ = nullptr;
  std::vector<Gf> c_;
};

/// Monic gcd; gcd(f, 0) = monic(f). Not both zero.
Poly poly_gcd(const Poly& f, const Poly& g);

/// Degrees of the irreducible factors of a squarefree f (distinct-degree
/// factorization), as (degree, product of factors of that degree).
std::vector<std::pair<int, Poly>> distinct_degree_factors(const Poly& f);

bool is_irreducible(const Poly& f);

struct RootSet {
  std::shared_ptr<const ExtField> field;
  /// (root, multiplicity), sorted by canonical order.
  std::vector<std::pair<Gf, int>> roots;
  int ext_degree() const { return field->degree(); }
  std::vector<Gf> distinct() const;
};

/// All roots of f in its splitting field over f's coefficient field.
/// Throws UnsupportedError if that field has degree > 6 over F_{p^2}.
RootSet find_roots(const Poly& f);

}  // namespace ssg

namespace ssg {

/// Smallest interned field containing both a and b.
std::shared_ptr<const ExtField> common_field(const ExtField& a, const ExtField& b);

}  // namespace ssg
