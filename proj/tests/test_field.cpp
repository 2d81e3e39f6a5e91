#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ssg/errors.hpp"
#include "ssg/field.hpp"

using namespace ssg;

namespace {
// Brute-force list of squares mod p.
std::set<u32> squares_mod(u32 p) {
  std::set<u32> s;
  for (u32 x = 1; x < p; ++x) s.insert(static_cast<u32>(u64{x} * x % p));
  return s;
}
}  // namespace

TEST_CASE("least nonresidue defines F_{p^2}") {
  CHECK(QuadExtField::build(7).nonresidue() == 3);
  CHECK(QuadExtField::build(11).nonresidue() == 2);
  for (u32 p : {13u, 17u, 19u, 23u, 41u, 101u}) {
    auto sq = squares_mod(p);
    u32 n = QuadExtField::build(p).nonresidue();
    CHECK_FALSE(sq.count(n));
    for (u32 m = 1; m < n; ++m) CHECK(sq.count(m));
  }
  CHECK_THROWS_AS(QuadExtField::build(5), PreconditionError);
  CHECK_THROWS_AS(QuadExtField::build(9), PreconditionError);
  CHECK_THROWS_AS(QuadExtField::build(4), PreconditionError);
}

TEST_CASE("F_p square roots") {
  PrimeField f13(13);
  CHECK(f13.sqrt(4) == 2u);
  CHECK(f13.sqrt(0) == 0u);
  CHECK_FALSE(PrimeField(5).sqrt(2).has_value());
  for (u32 p : {7u, 13u, 17u, 101u, 1009u}) {
    PrimeField f(p);
    auto sq = squares_mod(p);
    for (u32 a = 1; a < p; ++a) {
      auto r = f.sqrt(a);
      REQUIRE(r.has_value() == static_cast<bool>(sq.count(a)));
      if (r) CHECK(f.mul(*r, *r) == a);
    }
  }
}

TEST_CASE("F_{p^2} and extension arithmetic") {
  for (u32 p : {7u, 11u, 13u, 31u}) {
    auto K = ExtField::base_field(p);
    std::mt19937_64 rng(p);
    for (int i = 0; i < 50; ++i) {
      Gf a = K->random(rng);
      if (a.is_zero()) continue;
      CHECK((a * a.inv()).is_one());
      CHECK(a.frobenius().frobenius() == a);
      CHECK(a.pow(K->order() - 1).is_one());
    }
    for (int k : {2, 3, 6}) {
      auto L = ExtField::extension(p, k);
      REQUIRE(L->degree() == k);
      Gf a = L->random(rng);
      Gf b = L->random(rng);
      if (a.is_zero()) continue;
      CHECK((a * a.inv()).is_one());
      CHECK(a.pow(L->order() - 1).is_one());
      CHECK((a + b) * a == a * a + b * a);
      // Embeddings respect arithmetic.
      if (k % 2 == 0 || k == 6) {
        auto S = ExtField::extension(p, k == 6 ? 3 : 1);
        Gf u = S->random(rng), v = S->random(rng);
        CHECK(embed(u * v, *L) == embed(u, *L) * embed(v, *L));
        CHECK(embed(u + v, *L) == embed(u, *L) + embed(v, *L));
      }
    }
  }
}

TEST_CASE("extension fields are interned") {
  CHECK(ExtField::extension(13, 3).get() == ExtField::extension(13, 3).get());
  CHECK(ExtField::base_field(13).get() == ExtField::extension(13, 1).get());
}

TEST_CASE("square_root over F_{p^2}") {
  auto K = ExtField::base_field(13);
  auto r = square_root(K->from_int(4));
  REQUIRE(r);
  CHECK(*r == K->from_int(2));
  CHECK(square_root(K->zero())->is_zero());
  // Every element of F_p is a square in F_{p^2}.
  for (int a = 1; a < 13; ++a) CHECK(square_root(K->from_int(a)).has_value());
  std::mt19937_64 rng(5);
  int squares = 0;
  for (int i = 0; i < 200; ++i) {
    Gf a = K->random(rng);
    if (a.is_zero()) continue;
    auto s = square_root(a);
    CHECK(s.has_value() == a.pow((K->order() - 1) / 2).is_one());
    if (s) {
      CHECK(s->sqr() == a);
      ++squares;
    }
  }
  CHECK(squares > 50);
}

TEST_CASE("find_roots") {
  SUBCASE("x^2 - 1 over F_7") {
    auto K = ExtField::base_field(7);
    RootSet rs = find_roots(Poly::from_ints(K.get(), {-1, 0, 1}));
    CHECK(rs.ext_degree() == 1);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.roots[0].first == K->from_int(1));
    CHECK(rs.roots[1].first == K->from_int(6));
  }
  SUBCASE("x^2 + 1 over F_11 has roots outside F_11") {
    auto K = ExtField::base_field(11);
    RootSet rs = find_roots(Poly::from_ints(K.get(), {1, 0, 1}));
    REQUIRE(rs.roots.size() == 2);
    for (auto& [r, m] : rs.roots) {
      CHECK(m == 1);
      CHECK(r.coords()[0].c1 != 0);
      CHECK((r * r) == K->from_int(-1));
    }
  }
  SUBCASE("x^6 - 1 over F_121") {
    auto K = ExtField::base_field(11);
    RootSet rs = find_roots(Poly::from_ints(K.get(), {-1, 0, 0, 0, 0, 0, 1}));
    CHECK(rs.ext_degree() == 1);
    CHECK(rs.roots.size() == 6);
  }
  SUBCASE("multiplicities") {
    auto K = ExtField::base_field(13);
    Poly f = Poly::from_roots(K.get(), {K->from_int(2), K->from_int(2), K->from_int(5)});
    RootSet rs = find_roots(f);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.roots[0].second == 2);
    CHECK(rs.roots[1].second == 1);
  }
  SUBCASE("irreducible cubic needs a degree-3 extension") {
    auto K = ExtField::base_field(13);
    std::mt19937_64 rng(9);
    for (;;) {
      Poly f(K.get(), {K->random(rng), K->random(rng), K->random(rng), K->one()});
      if (!is_irreducible(f)) continue;
      RootSet rs = find_roots(f);
      CHECK(rs.ext_degree() == 3);
      REQUIRE(rs.roots.size() == 3);
      for (auto& [r, m] : rs.roots) CHECK(f.embed_into(*rs.field).eval(r).is_zero());
      break;
    }
  }
  SUBCASE("deterministic") {
    auto K = ExtField::base_field(31);
    Poly f = Poly::from_ints(K.get(), {3, 1, 0, 7, 0, 2, 1});
    RootSet a = find_roots(f), b = find_roots(f);
    CHECK(a.field == b.field);
    CHECK(a.roots == b.roots);
    int total = 0;
    for (auto& [r, m] : a.roots) total += m;
    CHECK(total == 6);
  }
}

TEST_CASE("poly_gcd") {
  auto K = ExtField::base_field(7);
  auto P = [&](std::vector<long long> c) { return Poly::from_ints(K.get(), c); };
  CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));
  CHECK(poly_gcd(P({4, 0, 2}), Poly(K.get())) == P({2, 0, 1}));
  CHECK(poly_gcd(P({1, 0, 1}), P({0, 1, 1})) == P({1}));
  CHECK_THROWS_AS(poly_gcd(Poly(K.get()), Poly(K.get())), PreconditionError);
}
