#include "ssg/richelot.hpp"

#include <algorithm>
#include <atomic>

#include "ssg/errors.hpp"

namespace ssg {

namespace {

// Linear form z X - x vanishing at (x : z), as a polynomial in X.
Poly linear_form(const ProjPoint& pt) { return Poly(pt.x.field(), {-pt.x, pt.z}); }

// The two zeros in P^1 of a form of formal degree 2, inside `field`.
std::array<ProjPoint, 2> quadratic_zeros(const Poly& q, const ExtField& field) {
  const Poly qq = q.embed_into(field);
  if (qq.degree() == 1) return {ProjPoint::finite(-(qq.coeff(0) / qq.coeff(1))), ProjPoint::infinity(&field)};
  SSG_CHECK(qq.degree() == 2, "quadratic factor of degree " + std::to_string(qq.degree()));
  RootSet rs = find_roots(qq);
  SSG_CHECK(rs.field.get() == &field, "quadratic factor splits outside the model field");
  SSG_CHECK(rs.roots.size() == 2, "quadratic factor with a double root");
  return {ProjPoint::finite(rs.roots[0].first), ProjPoint::finite(rs.roots[1].first)};
}

int index_of(const ProjPoint& pt, const std::array<ProjPoint, 6>& roots) {
  for (int i = 0; i < 6; ++i)
    if (roots[i] == pt) return i;
  throw InvariantError("point is not a branch point of the codomain");
}

Pairing pairing_from_factors(const std::array<Poly, 3>& G, const SexticModel& m) {
  Pairing pr{};
  for (int i = 0; i < 3; ++i) {
    auto z = quadratic_zeros(G[i], *m.field);
    pr[i] = {index_of(z[0], m.roots), index_of(z[1], m.roots)};
  }
  return pr;
}

std::array<Gf, 3> coeffs3(const Poly& f) { return {f.coeff(0), f.coeff(1), f.coeff(2)}; }

std::atomic<long> g_degeneracy_disagreements{0};

}  // namespace

long gluing_degeneracy_disagreements() { return g_degeneracy_disagreements.load(); }

const std::vector<Pairing>& all_pairings() {
  static const std::vector<Pairing> list = [] {
    std::vector<Pairing> out;
    for (int a = 1; a < 6; ++a) {
      std::vector<int> rest;
      for (int i = 1; i < 6; ++i)
        if (i != a) rest.push_back(i);
      for (int b = 1; b < 4; ++b) {
        std::vector<int> last;
        for (int i = 1; i < 4; ++i)
          if (i != b) last.push_back(rest[i]);
        out.push_back({{{0, a}, {rest[0], rest[b]}, {last[0], last[1]}}});
      }
    }
    return out;
  }();
  return list;
}

QuadraticSplitting splitting_for(const SexticModel& c, const Pairing& pr) {
  QuadraticSplitting s{pr, {}};
  for (int i = 0; i < 3; ++i) s.F[i] = linear_form(c.roots[pr[i][0]]) * linear_form(c.roots[pr[i][1]]);
  const Poly prod = s.F[0] * s.F[1] * s.F[2];
  SSG_CHECK(prod.degree() == c.f.degree(), "pairing does not reproduce the sextic");
  s.F[0] = s.F[0] * (c.f.leading() / prod.leading());
  return s;
}

std::vector<QuadraticSplitting> quadratic_splittings(const SexticModel& c) {
  std::vector<QuadraticSplitting> out;
  for (const auto& pr : all_pairings()) out.push_back(splitting_for(c, pr));
  return out;
}

Gf splitting_delta(const std::array<Poly, 3>& F) {
  const auto a = coeffs3(F[0]), b = coeffs3(F[1]), c = coeffs3(F[2]);
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

std::array<Poly, 3> richelot_dual_factors(const std::array<Poly, 3>& F) {
  const Gf di = splitting_delta(F).inv();
  std::array<Poly, 3> G;
  for (int i = 0; i < 3; ++i) {
    const Poly& Fj = F[(i + 1) % 3];
    const Poly& Fk = F[(i + 2) % 3];
    G[i] = (Fj.derivative() * Fk - Fk.derivative() * Fj) * di;
  }
  return G;
}

bool richelot_identity_holds(const std::array<Poly, 3>& F, const std::array<Poly, 3>& G) {
  const ExtField* K = F[0].field();
  // coefficient of x1^a x2^b
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      Gf s = K->zero();
      for (int i = 0; i < 3; ++i) s += F[i].coeff(a) * G[i].coeff(b);
      if (a + b == 2) s += K->from_int(a == 1 ? -2 : 1);
      if (!s.is_zero()) return false;
    }
  return true;
}

const std::vector<ProductKernel>& product_kernels() {
  static const std::vector<ProductKernel> list = [] {
    std::vector<ProductKernel> out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out.push_back({false, i, j, {0, 1, 2}});
    Perm3 pi{0, 1, 2};
    do {
      out.push_back({true, 0, 0, pi});
    } while (std::next_permutation(pi.begin(), pi.end()));
    return out;
  }();
  return list;
}

SurfaceModel SurfaceModel::jacobian(SexticModel c) {
  SurfaceModel m;
  m.product = false;
  m.curve = std::move(c);
  return m;
}

SurfaceModel SurfaceModel::elliptic_pair(EllipticModel a, EllipticModel b) {
  SurfaceModel m;
  m.product = true;
  m.e1 = std::move(a);
  m.e2 = std::move(b);
  return m;
}

VertexKey surface_key(const SurfaceModel& m) {
  if (m.product) return product_key(m.e1.j(), m.e2.j());
  return canonical_jacobian_key(clebsch_invariants(m.curve.f));
}

IsogenyStep richelot_codomain(const SexticModel& c, const Pairing& pr) {
  const QuadraticSplitting s = splitting_for(c, pr);
  const Gf delta = splitting_delta(s.F);
  IsogenyStep st;
  if (!delta.is_zero()) {
    const auto G = richelot_dual_factors(s.F);
    st.identity_ok = richelot_identity_holds(s.F, G);
    st.codomain = SurfaceModel::jacobian(SexticModel::from_poly(G[0] * G[1] * G[2]));
    st.dual_pairing = pairing_from_factors(G, st.codomain.curve);
    st.key = surface_key(st.codomain);
    return st;
  }

  // delta = 0: the codomain is E x E'. Find the two squares in the pencil F1 + l F2.
  st.split = true;
  const auto a = coeffs3(s.F[0]), b = coeffs3(s.F[1]);
  const Poly disc(c.field.get(), {a[1] * a[1] - a[2] * a[0] * 4, a[1] * b[1] * 2 - (a[2] * b[0] + b[2] * a[0]) * 4,
                                  b[1] * b[1] - b[2] * b[0] * 4});
  if (disc.degree() != 2) throw InvariantError("degenerate split Richelot pencil");
  RootSet lam = find_roots(disc);
  if (lam.roots.size() != 2) throw InvariantError("split Richelot pencil with repeated discriminant root");
  const ExtField& T = *lam.field;
  std::array<Poly, 3> F;
  for (int i = 0; i < 3; ++i) F[i] = s.F[i].embed_into(T);
  const Poly Q1 = F[0] + F[1] * lam.roots[0].first;
  const Poly Q2 = F[0] + F[1] * lam.roots[1].first;
  const auto q1 = coeffs3(Q1), q2 = coeffs3(Q2);
  int r = 0, t = 1;
  for (auto [u, v] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
    if (!(q1[u] * q2[v] - q1[v] * q2[u]).is_zero()) {
      r = u;
      t = v;
      break;
    }
  const Gf det = q1[r] * q2[t] - q1[t] * q2[r];
  SSG_CHECK(!det.is_zero(), "pencil squares are proportional");
  std::array<Gf, 3> alpha, beta;
  for (int i = 0; i < 3; ++i) {
    const auto f = coeffs3(F[i]);
    alpha[i] = (f[r] * q2[t] - f[t] * q2[r]) / det;
    beta[i] = (q1[r] * f[t] - q1[t] * f[r]) / det;
    SSG_CHECK(Q1 * alpha[i] + Q2 * beta[i] == F[i], "quadratic factor outside the pencil");
    SSG_CHECK(!alpha[i].is_zero() && !beta[i].is_zero(), "quadratic factor is a square");
  }
  // E: Y^2 = prod(alpha_i X + beta_i), E': Y^2 = prod(beta_i X + alpha_i).
  std::array<Gf, 3> r1, r2;
  for (int i = 0; i < 3; ++i) {
    r1[i] = -(beta[i] / alpha[i]);
    r2[i] = -(alpha[i] / beta[i]);
  }
  EllipticModel e{lam.field, r1}, e2{lam.field, r2};
  std::sort(e.roots.begin(), e.roots.end());
  std::sort(e2.roots.begin(), e2.roots.end());
  auto pos = [](const std::array<Gf, 3>& sorted, const Gf& x) {
    return static_cast<int>(std::find(sorted.begin(), sorted.end(), x) - sorted.begin());
  };
  st.dual_product.gluing = true;
  for (int i = 0; i < 3; ++i) {
    const int pi = pos(e.roots, r1[i]), pj = pos(e2.roots, r2[i]);
    SSG_CHECK(pi < 3 && pj < 3, "elliptic factor has repeated 2-torsion");
    st.dual_product.pi[pi] = pj;
  }
  st.codomain = SurfaceModel::elliptic_pair(e, e2);
  st.key = surface_key(st.codomain);
  return st;
}

IsogenyStep product_isogeny_codomain(const EllipticModel& e1, const EllipticModel& e2, const ProductKernel& k) {
  IsogenyStep st;
  if (!k.gluing) {
    const VeluStep v1 = velu_quotient(e1, k.i), v2 = velu_quotient(e2, k.j);
    st.codomain = SurfaceModel::elliptic_pair(v1.codomain, v2.codomain);
    st.dual_product = {false, v1.dual_index, v2.dual_index, {0, 1, 2}};
    st.key = surface_key(st.codomain);
    return st;
  }

  auto F = common_field(*e1.field, *e2.field);
  std::array<Gf, 3> al, be;
  for (int i = 0; i < 3; ++i) {
    al[i] = embed(e1.roots[i], *F);
    be[i] = embed(e2.roots[k.pi[i]], *F);
  }
  const Gf a2 = al[0] * (be[2] - be[1]) + al[1] * (be[0] - be[2]) + al[2] * (be[1] - be[0]);
  const Gf b2 = be[0] * (al[2] - al[1]) + be[1] * (al[0] - al[2]) + be[2] * (al[1] - al[0]);
  if (a2.is_zero() != b2.is_zero()) ++g_degeneracy_disagreements;
  if (a2.is_zero() || b2.is_zero()) {
    // The anti-isometry comes from an isomorphism E -> E': the quotient is
    // E' x E' and the dual kernel is its diagonal.
    st.isomorphism_loop = true;
    st.codomain = SurfaceModel::elliptic_pair(e2, e2);
    st.dual_product = {true, 0, 0, {0, 1, 2}};
    st.key = surface_key(st.codomain);
    return st;
  }
  auto sq = [](const Gf& x) { return x * x; };
  const Gf a1 = sq(al[2] - al[1]) / (be[2] - be[1]) + sq(al[1] - al[0]) / (be[1] - be[0]) +
                sq(al[0] - al[2]) / (be[0] - be[2]);
  const Gf b1 = sq(be[2] - be[1]) / (al[2] - al[1]) + sq(be[1] - be[0]) / (al[1] - al[0]) +
                sq(be[0] - be[2]) / (al[0] - al[2]);
  const Gf dp = sq((be[1] - be[2]) * (be[0] - be[2]) * (be[0] - be[1]));
  const Gf d = sq((al[1] - al[2]) * (al[0] - al[2]) * (al[0] - al[1]));
  const Gf A = dp * a1 / a2, B = d * b1 / b2;
  SSG_CHECK(!A.is_zero() && !B.is_zero(), "degenerate gluing constants");
  std::array<Poly, 3> Fs;
  for (int i = 0; i < 3; ++i) {
    const int n = (i + 1) % 3, l = (i + 2) % 3;
    // F_1 = A(a2-a1)(a1-a3) X^2 + B(b2-b1)(b1-b3) Z^2 and cyclic
    const Gf cx = A * (al[n] - al[i]) * (al[i] - al[l]);
    const Gf cz = B * (be[n] - be[i]) * (be[i] - be[l]);
    Fs[i] = Poly(F.get(), {cz, F->zero(), cx});
  }
  st.codomain = SurfaceModel::jacobian(SexticModel::from_poly(-(Fs[0] * Fs[1] * Fs[2])));
  st.dual_pairing = pairing_from_factors(Fs, st.codomain.curve);
  st.key = surface_key(st.codomain);
  return st;
}

std::vector<IsogenyStep> expand_surface(const SurfaceModel& m) {
  std::vector<IsogenyStep> out;
  if (m.product) {
    for (const auto& k : product_kernels()) out.push_back(product_isogeny_codomain(m.e1, m.e2, k));
  } else {
    for (const auto& pr : all_pairings()) out.push_back(richelot_codomain(m.curve, pr));
  }
  return out;
}

IsogenyStep apply_dual(const IsogenyStep& s) {
  if (s.codomain.product) return product_isogeny_codomain(s.codomain.e1, s.codomain.e2, s.dual_product);
  return richelot_codomain(s.codomain.curve, s.dual_pairing);
}

}  // namespace ssg
