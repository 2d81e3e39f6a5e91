#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <set>

#include "ssg/errors.hpp"
#include "ssg/richelot.hpp"

using namespace ssg;

namespace {

SurfaceModel square_of_first(u32 p) {
  auto j = enumerate_supersingular(p).j_list.front();
  auto e = two_torsion_model(j);
  return SurfaceModel::elliptic_pair(e, e);
}

// Breadth-first closure over keys, returning one model per key.
std::map<VertexKey, SurfaceModel> closure(u32 p) {
  std::map<VertexKey, SurfaceModel> seen;
  std::deque<SurfaceModel> todo{square_of_first(p)};
  seen.emplace(surface_key(todo.front()), todo.front());
  while (!todo.empty()) {
    SurfaceModel m = todo.front();
    todo.pop_front();
    for (const auto& st : expand_surface(m))
      if (seen.emplace(st.key, st.codomain).second) todo.push_back(st.codomain);
  }
  return seen;
}

}  // namespace

TEST_CASE("pairings and splittings") {
  const auto& prs = all_pairings();
  CHECK(prs.size() == 15);
  CHECK(std::set<Pairing>(prs.begin(), prs.end()).size() == 15);
  CHECK(prs.front() == Pairing{{{0, 1}, {2, 3}, {4, 5}}});
  CHECK(std::is_sorted(prs.begin(), prs.end()));

  auto K = ExtField::base_field(13);
  const ExtField* k = K.get();
  auto c = SexticModel::from_poly(Poly::from_ints(k, {-1, 0, 0, 0, 0, 0, 1}));
  auto ss = quadratic_splittings(c);
  REQUIRE(ss.size() == 15);
  const std::set<std::vector<long long>> want = {{-1, 0, 1}, {1, 1, 1}, {1, -1, 1}};
  bool found = false;
  for (const auto& s : ss) {
    Poly prod = s.F[0] * s.F[1] * s.F[2];
    CHECK(prod == c.f);
    bool all = true;
    for (const auto& Fi : s.F) {
      bool hit = false;
      for (const auto& w : want) hit |= Fi.monic() == Poly::from_ints(k, w);
      all &= hit;
    }
    found |= all;
  }
  CHECK(found);

  auto c5 = SexticModel::from_poly(Poly::from_ints(k, {0, 1, 0, 0, 0, 1}));
  for (const auto& s : quadratic_splittings(c5)) {
    int linear = 0;
    for (const auto& Fi : s.F) linear += Fi.degree() == 1;
    CHECK(linear == 1);
    CHECK(s.F[0] * s.F[1] * s.F[2] == c5.f);
  }
}

TEST_CASE("splitting determinant") {
  auto K = ExtField::base_field(13);
  const ExtField* k = K.get();
  auto P = [&](std::vector<long long> v) { return Poly::from_ints(k, v); };
  CHECK(splitting_delta({P({-1, 0, 1}), P({-4, 0, 1}), P({-9, 0, 1})}).is_zero());
  CHECK(splitting_delta({P({-1, 0, 1}), P({1, 1, 1}), P({1, -1, 1})}) == k->from_int(-4));
  CHECK(splitting_delta({P({1, 2, 3}), P({0, 1, 5}), P({2, 5, 11})}).is_zero());
}

TEST_CASE("Richelot identity and round trips at p = 11, 17, 19") {
  for (u32 p : {11u, 17u, 19u}) {
    auto verts = closure(p);
    int identities = 0, trips = 0;
    for (const auto& [key, m] : verts) {
      auto steps = expand_surface(m);
      CHECK(steps.size() == 15);
      for (const auto& st : steps) {
        if (st.identity_ok) {
          CHECK(*st.identity_ok);
          ++identities;
        }
        CHECK_MESSAGE(apply_dual(st).key == key, "p=" << p << " from " << key.to_string());
        ++trips;
      }
    }
    CHECK(trips == 15 * static_cast<int>(verts.size()));
    MESSAGE("p=" << p << " vertices=" << verts.size() << " identities=" << identities);
  }
  CHECK(closure(11).size() == 5);
  CHECK(closure(17).size() == 8);
  CHECK(gluing_degeneracy_disagreements() == 0);
}

TEST_CASE("product kernels") {
  const auto& ks = product_kernels();
  CHECK(ks.size() == 15);
  CHECK(std::count_if(ks.begin(), ks.end(), [](auto& k) { return !k.gluing; }) == 9);
  CHECK(std::count_if(ks.begin(), ks.end(), [](auto& k) { return k.gluing; }) == 6);
  // Identity gluing on a square is a loop.
  auto sq = square_of_first(17);
  auto st = product_isogeny_codomain(sq.e1, sq.e2, ks[9]);
  CHECK(st.isomorphism_loop);
  CHECK(st.key == surface_key(sq));
}

TEST_CASE("split steps from a Type-III-like splitting") {
  auto K = ExtField::base_field(101);
  auto c = SexticModel::from_poly(Poly::from_ints(K.get(), {-1, 0, 1}) * Poly::from_ints(K.get(), {-4, 0, 1}) *
                                  Poly::from_ints(K.get(), {-9, 0, 1}));
  // roots sorted: locate the pairing {+-1}, {+-2}, {+-3}
  Pairing pr{};
  int n = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      if ((c.roots[a].x + c.roots[b].x).is_zero()) pr[n++] = {a, b};
  REQUIRE(n == 3);
  auto st = richelot_codomain(c, pr);
  CHECK(st.split);
  CHECK(st.codomain.product);
  CHECK(apply_dual(st).key == canonical_jacobian_key(clebsch_invariants(c.f)));
}
