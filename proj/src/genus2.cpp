#include "ssg/genus2.hpp"

#include <algorithm>
#include <sstream>

#include "ssg/errors.hpp"

namespace ssg {

// ---------------------------------------------------------------------------
// Projective points and binary forms

ProjPoint ProjPoint::finite(const Gf& x) { return {x, x.field()->one()}; }

ProjPoint ProjPoint::infinity(const ExtField* f) { return {f->one(), f->zero()}; }

ProjPoint ProjPoint::normalized() const {
  if (z.is_zero()) {
    SSG_CHECK(!x.is_zero(), "(0 : 0) is not a point of P^1");
    return infinity(x.field());
  }
  return finite(x / z);
}

ProjPoint ProjPoint::embedded(const ExtField& target) const { return {embed(x, target), embed(z, target)}; }

namespace {

long long falling(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

long long factorial(int n) { return falling(n, n); }

const ExtField* field_of(const BinaryForm& f) {
  for (const auto& c : f.coef)
    if (c.field()) return c.field();
  throw PreconditionError("binary form without a field");
}

}  // namespace

BinaryForm BinaryForm::from_poly(const Poly& f, int deg) {
  if (f.degree() > deg) throw PreconditionError("polynomial exceeds the formal degree of the form");
  BinaryForm b{deg, {}};
  for (int k = 0; k <= deg; ++k) b.coef.push_back(f.coeff(k));
  return b;
}

BinaryForm BinaryForm::derive(int dx, int dz) const {
  const ExtField* F = field_of(*this);
  BinaryForm r{deg - dx - dz, std::vector<Gf>(std::max(deg - dx - dz + 1, 0), F->zero())};
  for (int k = dx; k <= deg; ++k) {
    if (deg - k < dz) continue;
    r.coef[k - dx] = coef[k] * (falling(k, dx) * falling(deg - k, dz));
  }
  return r;
}

BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
  const ExtField* F = field_of(a);
  BinaryForm r{a.deg + b.deg, std::vector<Gf>(a.deg + b.deg + 1, F->zero())};
  for (int i = 0; i <= a.deg; ++i) {
    if (a.coef[i].is_zero()) continue;
    for (int j = 0; j <= b.deg; ++j) r.coef[i + j] += a.coef[i] * b.coef[j];
  }
  return r;
}

BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
  SSG_CHECK(a.deg == b.deg, "adding forms of different degree");
  BinaryForm r = a;
  for (int i = 0; i <= a.deg; ++i) r.coef[i] += b.coef[i];
  return r;
}

BinaryForm BinaryForm::scaled(const Gf& s) const {
  BinaryForm r = *this;
  for (auto& c : r.coef) c *= s;
  return r;
}

BinaryForm transvectant(const BinaryForm& f, const BinaryForm& g, int k) {
  const int n = f.deg, m = g.deg;
  if (k > n || k > m) throw PreconditionError("transvectant order exceeds form degree");
  const ExtField* F = field_of(f);
  BinaryForm sum{n + m - 2 * k, std::vector<Gf>(n + m - 2 * k + 1, F->zero())};
  long long binom = 1;
  for (int j = 0; j <= k; ++j) {
    BinaryForm term = f.derive(k - j, j) * g.derive(j, k - j);
    sum = sum + term.scaled(F->from_int(j % 2 ? -binom : binom));
    binom = binom * (k - j) / (j + 1);
  }
  const Gf norm = F->from_int(factorial(n - k) * factorial(m - k)) / F->from_int(factorial(n) * factorial(m));
  return sum.scaled(norm);
}

// ---------------------------------------------------------------------------
// Sextic models

SexticModel SexticModel::from_poly(const Poly& f) {
  if (f.degree() != 5 && f.degree() != 6)
    throw PreconditionError("genus-2 model needs degree 5 or 6, got " + std::to_string(f.degree()));
  RootSet rs = find_roots(f);
  for (const auto& [r, m] : rs.roots)
    if (m != 1) throw PreconditionError("sextic is not squarefree: " + f.to_string());
  SSG_CHECK(static_cast<int>(rs.roots.size()) == f.degree(), "root count mismatch");
  SexticModel s;
  s.field = rs.field;
  s.f = f.embed_into(*rs.field);
  for (int i = 0; i < f.degree(); ++i) s.roots[i] = ProjPoint::finite(rs.roots[i].first);
  if (f.degree() == 5) s.roots[5] = ProjPoint::infinity(rs.field.get());
  return s;
}

// ---------------------------------------------------------------------------
// Invariants

Clebsch clebsch_invariants(const Poly& f) {
  if (f.degree() < 5) throw PreconditionError("not a genus-2 sextic: " + f.to_string());
  const BinaryForm F = BinaryForm::from_poly(f, 6);
  const BinaryForm i = transvectant(F, F, 4);
  const BinaryForm delta = transvectant(i, i, 2);
  const BinaryForm y1 = transvectant(F, i, 4);
  const BinaryForm y2 = transvectant(i, y1, 2);
  const BinaryForm y3 = transvectant(i, y2, 2);
  return Clebsch{transvectant(F, F, 6).coef[0], transvectant(i, i, 4).coef[0], transvectant(i, delta, 4).coef[0],
                 transvectant(y3, y1, 2).coef[0]};
}

MestreDerived mestre_derived(const Clebsch& c) {
  const ExtField* K = c.A.field();
  const Gf half = K->from_int(2).inv(), third = K->from_int(3).inv();
  MestreDerived m;
  m.A11 = c.C * 2 + third * c.A * c.B;
  m.A12 = third * 2 * (c.B * c.B + c.A * c.C);
  m.A23 = half * c.B * m.A12 + third * c.C * m.A11;
  m.A22 = c.D;
  m.A31 = c.D;
  m.A33 = half * c.B * m.A22 + third * c.C * m.A12;
  const Gf det = m.A11 * (m.A22 * m.A33 - m.A23 * m.A23) - m.A12 * (m.A12 * m.A33 - m.A23 * m.A31) +
                 m.A31 * (m.A12 * m.A23 - m.A22 * m.A31);
  m.R2 = half * det;
  return m;
}

int ra_order(RAType t) {
  switch (t) {
    case RAType::A: return 1;
    case RAType::I: return 2;
    case RAType::II: return 5;
    case RAType::III: return 4;
    case RAType::IV: return 6;
    case RAType::V: return 12;
    case RAType::VI: return 24;
    case RAType::Pi: return 2;
    case RAType::Pi0: return 6;
    case RAType::Pi1728: return 4;
    case RAType::Pi0_1728: return 12;
    case RAType::Sigma: return 4;
    case RAType::Sigma0: return 36;
    case RAType::Sigma1728: return 16;
  }
  return 0;
}

std::string ra_name(RAType t) {
  switch (t) {
    case RAType::A: return "A";
    case RAType::I: return "I";
    case RAType::II: return "II";
    case RAType::III: return "III";
    case RAType::IV: return "IV";
    case RAType::V: return "V";
    case RAType::VI: return "VI";
    case RAType::Pi: return "Pi";
    case RAType::Pi0: return "Pi_0";
    case RAType::Pi1728: return "Pi_12^3";
    case RAType::Pi0_1728: return "Pi_0,12^3";
    case RAType::Sigma: return "Sigma";
    case RAType::Sigma0: return "Sigma_0";
    case RAType::Sigma1728: return "Sigma_12^3";
  }
  return "?";
}

bool is_product_type(RAType t) { return static_cast<int>(t) >= static_cast<int>(RAType::Pi); }

RAType bolza_type(const Clebsch& c, TypeIReading reading) {
  const auto& [A, B, C, D] = c;
  const MestreDerived m = mestre_derived(c);
  if (A.is_zero() && B.is_zero() && C.is_zero() && !D.is_zero()) return RAType::II;
  if (B.is_zero() && C.is_zero() && D.is_zero() && !A.is_zero()) return RAType::VI;
  if (B * 6 == A * A && D.is_zero() && m.A11.is_zero() && !A.is_zero()) return RAType::V;
  if (C * C * 6 == B * B * B && D * 3 == B * m.A11 * 2 && A * B * 2 != C * 15 && !D.is_zero()) return RAType::IV;
  if (B * m.A11 - A * m.A12 * 2 == D * -6 && C * m.A11 + B * m.A12 * 2 == A * D && !D.is_zero() &&
      C * C * 6 != B * B * B)
    return RAType::III;
  if (m.R2.is_zero()) {
    switch (reading) {
      case TypeIReading::Literal:
        if (m.A11 * m.A22 != m.A12) return RAType::I;
        break;
      case TypeIReading::Squared:
        if (m.A11 * m.A22 != m.A12 * m.A12) return RAType::I;
        break;
      case TypeIReading::None:
        return RAType::I;
    }
  } else {
    return RAType::A;
  }
  throw InvariantError("no Bolza type matches Clebsch invariants (" + A.to_string() + ", " + B.to_string() + ", " +
                       C.to_string() + ", " + D.to_string() + ")");
}

// ---------------------------------------------------------------------------
// Moebius stabilizer

namespace {

struct Mat2 {
  Gf a, b, c, d;
  ProjPoint apply(const ProjPoint& p) const { return {a * p.x + b * p.z, c * p.x + d * p.z}; }
  Mat2 adjugate() const { return {d, -b, -c, a}; }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
};

Gf cross(const ProjPoint& p, const ProjPoint& q) { return p.x * q.z - q.x * p.z; }

// Sends p1, p2, p3 to 0, 1, infinity.
Mat2 to_standard(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3) {
  const Gf l23 = cross(p2, p3), l21 = cross(p2, p1);
  return {l23 * p1.z, -(l23 * p1.x), l21 * p3.z, -(l21 * p3.x)};
}

}  // namespace

std::vector<Moebius> moebius_matches(const std::array<ProjPoint, 6>& from_in, const std::array<ProjPoint, 6>& to_in) {
  auto F = common_field(*from_in[0].x.field(), *to_in[0].x.field());
  std::array<ProjPoint, 6> from, to;
  for (int i = 0; i < 6; ++i) {
    from[i] = from_in[i].embedded(*F);
    to[i] = to_in[i].embedded(*F);
  }
  const Mat2 ta = to_standard(from[0], from[1], from[2]);
  std::vector<Moebius> out;
  for (int b0 = 0; b0 < 6; ++b0)
    for (int b1 = 0; b1 < 6; ++b1)
      for (int b2 = 0; b2 < 6; ++b2) {
        if (b0 == b1 || b0 == b2 || b1 == b2) continue;
        const Mat2 s = to_standard(to[b0], to[b1], to[b2]).adjugate() * ta;
        Moebius m{s.a, s.b, s.c, s.d, {}};
        bool ok = true;
        std::array<bool, 6> hit{};
        for (int i = 0; i < 6 && ok; ++i) {
          const ProjPoint img = s.apply(from[i]);
          int found = -1;
          for (int j = 0; j < 6; ++j)
            if (!hit[j] && img == to[j]) found = j;
          ok = found >= 0;
          if (ok) {
            hit[found] = true;
            m.perm[i] = found;
          }
        }
        if (ok) out.push_back(m);
      }
  return out;
}

std::vector<Moebius> moebius_group(const std::array<ProjPoint, 6>& roots) { return moebius_matches(roots, roots); }

// ---------------------------------------------------------------------------
// Keys

std::vector<u32> VertexKey::encode() const {
  std::vector<u32> out{tag};
  for (const auto& v : vals) {
    out.push_back(v.c0);
    out.push_back(v.c1);
  }
  return out;
}

std::string VertexKey::to_string() const {
  std::ostringstream os;
  os << static_cast<int>(tag) << ":";
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) os << ",";
    os << vals[i].c0;
    if (vals[i].c1) os << "+" << vals[i].c1 << "t";
  }
  return os.str();
}

VertexKey canonical_jacobian_key(const Clebsch& c) {
  const auto& [A, B, C, D] = c;
  auto down = [](const Gf& x) {
    SSG_CHECK(x.in_base(), "normalized Clebsch invariant outside F_{p^2}");
    return x.base_value();
  };
  if (!A.is_zero()) {
    const Gf a = A.inv(), a2 = a * a, a3 = a2 * a;
    return {0, {down(B * a2), down(C * a3), down(D * a3 * a2)}};
  }
  if (!B.is_zero()) {
    const Gf b = B.inv(), b2 = b * b, b3 = b2 * b;
    return {1, {down(C * C * b3), down(D * D * b3 * b2), down(C * D * b2 * b2)}};
  }
  if (!C.is_zero()) {
    const Gf c5 = C.pow(5).inv();
    return {2, {down(D * D * D * c5)}};
  }
  if (D.is_zero()) throw PreconditionError("all Clebsch invariants vanish");
  return {3, {}};
}

VertexKey product_key(const Gf& j1, const Gf& j2) {
  Fp2 a = j1.base_value(), b = j2.base_value();
  if (b < a) std::swap(a, b);
  return {4, {a, b}};
}

RAType product_type(const Gf& j1, const Gf& j2) {
  const Gf k1728 = j1.field()->from_int(1728);
  auto cls = [&](const Gf& j) { return j.is_zero() ? 1 : j == k1728 ? 2 : 0; };
  const int a = cls(j1), b = cls(j2);
  if (j1 == j2) return a == 0 ? RAType::Sigma : a == 1 ? RAType::Sigma0 : RAType::Sigma1728;
  if (a == 0 && b == 0) return RAType::Pi;
  if (a + b == 3) return RAType::Pi0_1728;
  return a + b == 1 ? RAType::Pi0 : RAType::Pi1728;
}

}  // namespace ssg
