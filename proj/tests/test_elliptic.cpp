#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ssg/elliptic.hpp"
#include "ssg/errors.hpp"

using namespace ssg;

namespace {

// Point count of y^2 = x^3 + a x + b over F_p by Legendre symbols.
long long count_points(long long p, long long a, long long b) {
  auto legendre = [&](long long v) {
    v %= p;
    if (v < 0) v += p;
    if (v == 0) return 0LL;
    long long r = 1, base = v, e = (p - 1) / 2;
    while (e) {
      if (e & 1) r = r * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return r == 1 ? 1LL : -1LL;
  };
  long long n = p + 1;
  for (long long x = 0; x < p; ++x) n += legendre(x * x % p * x + a * x + b);
  return n;
}

// j in F_p is supersingular iff its curve over F_p has trace 0 (p >= 5).
bool brute_supersingular(long long p, long long j) {
  long long a, b;
  if (j == 0) {
    a = 0;
    b = p - 1;
  } else if (j == 1728 % p) {
    a = p - 1;
    b = 0;
  } else {
    // c = j / (1728 - j)
    long long den = ((1728 - j) % p + p) % p, inv = 1, e = p - 2, base = den;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    long long c = j * inv % p;
    a = 3 * c % p;
    b = 2 * c % p;
  }
  return count_points(p, a, b) == p + 1;
}

}  // namespace

TEST_CASE("supersingularity agrees with point counting over F_p") {
  for (u32 p : {7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u}) {
    auto K = ExtField::base_field(p);
    for (u32 j = 0; j < p; ++j) CHECK_MESSAGE(is_supersingular(K->from_int(j)) == brute_supersingular(p, j), "p=" << p << " j=" << j);
  }
  auto K11 = ExtField::base_field(11);
  CHECK(is_supersingular(K11->from_int(0)));
  CHECK(is_supersingular(K11->from_int(1728)));
  CHECK(is_supersingular(ExtField::base_field(13)->from_int(5)));
}

TEST_CASE("enumeration matches the class-number count") {
  auto s11 = enumerate_supersingular(11);
  auto K11 = ExtField::base_field(11);
  CHECK(s11.j_list.size() == 2);
  CHECK(s11.n_generic == 0);
  CHECK(std::set<JInvariant>(s11.j_list.begin(), s11.j_list.end()) ==
        std::set<JInvariant>{K11->from_int(0), K11->from_int(1728)});
  CHECK(enumerate_supersingular(17).j_list.size() == 2);
  CHECK(enumerate_supersingular(13).j_list.size() == 1);
  for (u32 p = 7; p < 400; ++p) {
    if (!is_prime(p)) continue;
    auto s = enumerate_supersingular(p);
    // floor(p/12) + {0,1,1,2} for p mod 12 = {1,5,7,11}
    const int extra[12] = {0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2};
    CHECK_MESSAGE(static_cast<int>(s.j_list.size()) == static_cast<int>(p / 12) + extra[p % 12], "p=" << p);
    CHECK(static_cast<int>(s.j_list.size()) == s.n_generic + s.eps1 + s.eps3);
    for (const auto& j : s.j_list) CHECK(is_supersingular(j));
  }
  CHECK(two_torsion_fallbacks() == 0);
}

TEST_CASE("two-torsion models") {
  auto K = ExtField::base_field(11);
  auto e1728 = two_torsion_model(K->from_int(1728));
  // roots {0, c, -c}
  std::set<JInvariant> r(e1728.roots.begin(), e1728.roots.end());
  CHECK(r.count(K->zero()));
  for (const auto& s : e1728.roots) CHECK(r.count(-s));
  auto e0 = two_torsion_model(K->zero());
  CHECK(e0.field->degree() == 1);
  for (const auto& s : e0.roots) CHECK((s * s * s).is_one());
  CHECK(e0.j() == K->zero());
  CHECK(e1728.j() == K->from_int(1728));
  for (u32 p : {101u, 103u, 1009u}) {
    for (const auto& j : enumerate_supersingular(p).j_list) {
      auto e = two_torsion_model(j);
      CHECK(e.field->degree() == 1);
      CHECK(e.j() == j);
    }
  }
}

TEST_CASE("Velu 2-isogenies") {
  auto K = ExtField::base_field(11);
  for (const auto& j : {K->zero(), K->from_int(1728)}) {
    auto e = two_torsion_model(j);
    for (int i = 0; i < 3; ++i) {
      JInvariant t = velu_two_isogeny(e, i);
      CHECK((t == K->zero() || t == K->from_int(1728)));
    }
  }
  for (u32 p : {17u, 41u, 97u}) {
    for (const auto& j : enumerate_supersingular(p).j_list) {
      auto e = two_torsion_model(j);
      for (int i = 0; i < 3; ++i) {
        auto st = velu_quotient(e, i);
        // dual returns to j
        CHECK(velu_two_isogeny(st.codomain, st.dual_index) == j);
      }
    }
  }
  // Independence of the model: a twist of the same curve gives the same j.
  auto K17 = ExtField::base_field(17);
  auto e = two_torsion_model(K17->from_int(8));
  Gf d = K17->from_int(3) + K17->from_fp2({0, 1});
  EllipticModel tw{e.field, {e.roots[0] * d + K17->one(), e.roots[1] * d + K17->one(), e.roots[2] * d + K17->one()}};
  for (int i = 0; i < 3; ++i) CHECK(velu_two_isogeny(tw, i) == velu_two_isogeny(e, i));
}

TEST_CASE("reduced automorphisms") {
  auto K = ExtField::base_field(11);
  CHECK(reduced_automorphisms(two_torsion_model(K->zero())).size() == 3);
  CHECK(reduced_automorphisms(two_torsion_model(K->from_int(1728))).size() == 2);
  auto s = enumerate_supersingular(101);
  for (const auto& j : s.j_list) {
    size_t expect = j.is_zero() ? 3 : j == j.field()->from_int(1728) ? 2 : 1;
    CHECK(reduced_automorphisms(two_torsion_model(j)).size() == expect);
  }
}

TEST_CASE("Gamma_1(2;p)") {
  auto g = build_gamma1(11);
  CHECK(g.graph.size() == 2);
  for (u32 p : {11u, 13u, 17u, 23u, 47u, 59u, 101u}) {
    auto h = build_gamma1(p);
    for (int d : h.graph.out_degree()) CHECK(d == 3);
    // aggregate ratio: ra(u) w(v->u) = ra(v) w(u->v)
    int n = h.graph.size();
    std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
    for (const auto& a : h.graph.arcs) w[a.src][a.dst] += a.weight;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) CHECK(h.graph.ra_order[u] * w[v][u] == h.graph.ra_order[v] * w[u][v]);
  }
}
