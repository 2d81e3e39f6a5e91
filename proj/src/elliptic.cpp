#include "ssg/elliptic.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>

#include "ssg/errors.hpp"

namespace ssg {

namespace {

std::atomic<long> g_fallbacks{0};

const Perm3 kPerms3[6] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// Short Weierstrass coefficients (a, b) of the model attached to j.
std::pair<Gf, Gf> weierstrass_ab(const JInvariant& j) {
  const ExtField* K = j.field();
  if (j.is_zero()) return {K->zero(), K->from_int(-1)};
  if (j == K->from_int(1728)) return {K->from_int(-1), K->zero()};
  const Gf c = j / (K->from_int(1728) - j);
  return {c * 3, c * 2};
}

std::array<Gf, 3> sorted3(std::array<Gf, 3> s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

JInvariant j_from_roots(const std::array<Gf, 3>& s) {
  const Gf sq = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
  const Gf mix = s[0] * s[1] + s[0] * s[2] + s[1] * s[2];
  const Gf t = sq - mix;
  const Gf disc = ((s[0] - s[1]) * (s[0] - s[2]) * (s[1] - s[2])).sqr();
  if (disc.is_zero()) throw PreconditionError("singular cubic: repeated 2-torsion root");
  const Gf j = t * t * t * 256 / disc;
  SSG_CHECK(j.in_base(), "j-invariant outside F_{p^2}");
  return descend(j);
}

JInvariant EllipticModel::j() const { return j_from_roots(roots); }

bool is_supersingular(const JInvariant& j) {
  const ExtField* K = j.field();
  const PrimeField& fp = K->quad().base();
  const u32 p = K->p();
  const u32 m = (p - 1) / 2;
  auto [a, b] = weierstrass_ab(j);

  std::vector<u32> fact(m + 1, 1), inv_fact(m + 1, 1);
  for (u32 i = 1; i <= m; ++i) fact[i] = fp.mul(fact[i - 1], i);
  inv_fact[m] = fp.inv(fact[m]);
  for (u32 i = m; i > 0; --i) inv_fact[i - 1] = fp.mul(inv_fact[i], i);
  std::vector<Gf> apow(m + 1, K->one()), bpow(m + 1, K->one());
  for (u32 i = 1; i <= m; ++i) {
    apow[i] = apow[i - 1] * a;
    bpow[i] = bpow[i - 1] * b;
  }
  // Terms (x^3)^i (a x)^k b^l of the multinomial expansion with 3i + k = p - 1.
  Gf h = K->zero();
  for (u32 i = 0; 3 * i <= p - 1; ++i) {
    const u32 k = p - 1 - 3 * i;
    if (i + k > m) continue;
    const u32 l = m - i - k;
    const u32 coef = fp.mul(fact[m], fp.mul(inv_fact[i], fp.mul(inv_fact[k], inv_fact[l])));
    h += apow[k] * bpow[l] * K->from_fp2(Fp2{coef, 0});
  }
  return h.is_zero();
}

int supersingular_generic_count(u32 p) {
  const int e1 = p % 4 == 3, e3 = p % 3 == 2;
  // 12 N = (p - 1) - 6 e1 - 4 e3
  const int twelve_n = static_cast<int>(p) - 1 - 6 * e1 - 4 * e3;
  SSG_CHECK(twelve_n % 12 == 0, "supersingular count not integral");
  return twelve_n / 12;
}

long two_torsion_fallbacks() { return g_fallbacks.load(); }

EllipticModel two_torsion_model(const JInvariant& j) {
  const ExtField* K = j.field();
  SSG_CHECK(K->degree() == 1, "j-invariant must live in F_{p^2}");
  auto [a, b] = weierstrass_ab(j);
  auto try_model = [&](const Gf& aa, const Gf& bb) {
    return find_roots(Poly(K, {bb, aa, K->zero(), K->one()}));
  };
  RootSet rs = try_model(a, b);
  if (rs.ext_degree() != 1) {
    Gf d = K->from_int(2);
    while (is_square(d)) d += K->one();
    RootSet tw = try_model(a * d * d, b * d * d * d);
    if (tw.ext_degree() == 1) {
      rs = std::move(tw);
    } else {
      ++g_fallbacks;
    }
  }
  SSG_CHECK(rs.roots.size() == 3, "cubic model is singular");
  return EllipticModel{rs.field, {rs.roots[0].first, rs.roots[1].first, rs.roots[2].first}};
}

VeluStep velu_quotient(const EllipticModel& e, int kernel_index) {
  if (kernel_index < 0 || kernel_index > 2) throw PreconditionError("kernel index outside 0..2");
  const Gf& s1 = e.roots[kernel_index];
  const Gf& s2 = e.roots[(kernel_index + 1) % 3];
  const Gf& s3 = e.roots[(kernel_index + 2) % 3];
  // Shift the kernel point to 0: y^2 = x (x^2 + a x + b).
  const Gf a = s1 * 2 - s2 - s3;
  const Gf b = (s1 - s2) * (s1 - s3);
  // Codomain: Y^2 = X (X^2 - 2a X + a^2 - 4b), dual kernel at X = 0.
  std::shared_ptr<const ExtField> F = e.field;
  Gf r = F->zero();
  if (auto sb = square_root(b)) {
    r = *sb;
  } else {
    RootSet rs = find_roots(Poly(F.get(), {-b, F->zero(), F->one()}));
    F = rs.field;
    r = rs.roots[0].first;
  }
  const Gf aa = embed(a, *F);
  std::array<Gf, 3> out{F->zero(), aa + r * 2, aa - r * 2};
  out = sorted3(out);
  VeluStep st{EllipticModel{F, out}, 0};
  for (int i = 0; i < 3; ++i)
    if (out[i].is_zero()) st.dual_index = i;
  return st;
}

JInvariant velu_two_isogeny(const EllipticModel& e, int kernel_index) {
  return velu_quotient(e, kernel_index).codomain.j();
}

std::vector<Perm3> affine_matches(const EllipticModel& a, const EllipticModel& b) {
  auto F = common_field(*a.field, *b.field);
  std::array<Gf, 3> s, t;
  for (int i = 0; i < 3; ++i) {
    s[i] = embed(a.roots[i], *F);
    t[i] = embed(b.roots[i], *F);
  }
  std::vector<Perm3> out;
  for (const auto& g : kPerms3) {
    const Gf u = (t[g[1]] - t[g[0]]) / (s[1] - s[0]);
    const Gf r = t[g[0]] - u * s[0];
    if (u * s[2] + r == t[g[2]]) out.push_back(g);
  }
  return out;
}

std::vector<Perm3> reduced_automorphisms(const EllipticModel& e) { return affine_matches(e, e); }

SupersingularSet enumerate_supersingular(u32 p) {
  auto K = ExtField::base_field(p);
  SupersingularSet out;
  out.p = p;
  out.eps1 = p % 4 == 3;
  out.eps3 = p % 3 == 2;
  out.n_generic = supersingular_generic_count(p);

  std::map<JInvariant, bool> seen;
  std::deque<JInvariant> todo;
  for (u32 v = 0; v < p; ++v) {
    const JInvariant j = K->from_int(v);
    if (is_supersingular(j) && !seen.count(j)) {
      seen[j] = true;
      todo.push_back(j);
    }
  }
  SSG_CHECK(!todo.empty(), "no supersingular j-invariant in F_p");
  while (!todo.empty()) {
    const JInvariant j = todo.front();
    todo.pop_front();
    const EllipticModel e = two_torsion_model(j);
    for (int i = 0; i < 3; ++i) {
      const JInvariant j2 = velu_two_isogeny(e, i);
      if (!seen.count(j2)) {
        seen[j2] = true;
        todo.push_back(j2);
      }
    }
  }
  for (const auto& [j, _] : seen) out.j_list.push_back(j);
  return out;
}

Gamma1 build_gamma1(u32 p) {
  Gamma1 g;
  g.p = p;
  g.j_list = enumerate_supersingular(p).j_list;
  std::map<JInvariant, int> index;
  for (int i = 0; i < static_cast<int>(g.j_list.size()); ++i) index[g.j_list[i]] = i;
  g.graph.ra_order.resize(g.j_list.size());

  for (int v = 0; v < static_cast<int>(g.j_list.size()); ++v) {
    const EllipticModel e = two_torsion_model(g.j_list[v]);
    const auto autos = reduced_automorphisms(e);
    g.graph.ra_order[v] = static_cast<int>(autos.size());
    std::array<bool, 3> done{};
    for (int k = 0; k < 3; ++k) {
      if (done[k]) continue;
      int weight = 0;
      const JInvariant target = velu_two_isogeny(e, k);
      for (int m = 0; m < 3; ++m) {
        bool in_orbit = false;
        for (const auto& g3 : autos) in_orbit |= g3[k] == m;
        if (!in_orbit || done[m]) continue;
        done[m] = true;
        ++weight;
        SSG_CHECK(velu_two_isogeny(e, m) == target, "automorphism orbit with distinct codomains");
      }
      auto it = index.find(target);
      SSG_CHECK(it != index.end(), "2-isogeny left the supersingular set");
      g.graph.arcs.push_back({v, it->second, weight});
    }
  }
  return g;
}

}  // namespace ssg
