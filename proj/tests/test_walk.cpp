#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "ssg/errors.hpp"
#include "ssg/walk.hpp"

using namespace ssg;

namespace {

// Twice the bound on E[TV] from per-vertex standard deviations of a reversible
// chain: (1/2) sum_v sqrt(phi(1 - phi) (1 + l2) / ((1 - l2) n)).
double tv_band(const TransitionMatrix& m, const StationaryDistribution& phi, long n) {
  const double l2 = std::max(0.0, lambda_star(m, phi).lambda2);
  double s = 0;
  for (double x : phi.values) s += std::sqrt(x * (1 - x));
  return s * std::sqrt((1 + l2) / (1 - l2) / static_cast<double>(n));
}

}  // namespace

TEST_CASE("walks are reproducible") {
  const auto g = build_graph(29);
  WalkConfig cfg;
  cfg.steps = 5000;
  cfg.seed = 7;
  cfg.record = true;
  const auto a = random_walk(g, cfg), b = random_walk(g, cfg);
  CHECK(a.trajectory == b.trajectory);
  CHECK(walk_json(g, a) == walk_json(g, b));
  CHECK(std::accumulate(a.visits.begin(), a.visits.end(), 0L) == cfg.steps);
  cfg.seed = 8;
  CHECK(random_walk(g, cfg).trajectory != a.trajectory);
  cfg.seed = 7;
  cfg.walk_index = 1;
  CHECK(random_walk(g, cfg).trajectory != a.trajectory);
}

TEST_CASE("a single step moves to a neighbour of the seed vertex") {
  const auto g = build_graph(11);
  WalkConfig cfg;
  cfg.steps = 1;
  cfg.record = true;
  const auto s = random_walk(g, cfg);
  REQUIRE(s.trajectory.size() == 1);
  CHECK(s.start == 0);
  bool neighbour = false;
  for (const auto& e : g.edges) neighbour = neighbour || (e.src == 0 && e.dst == s.trajectory[0]);
  CHECK(neighbour);
  const auto csv = walk_csv(g, s);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  cfg.steps = 0;
  CHECK_THROWS_AS(random_walk(g, cfg), PreconditionError);
}

TEST_CASE("subgraph walks stay inside and converge to their own distribution") {
  const auto g = build_graph(17);
  for (auto sel : {Selection::Jacobian, Selection::Product}) {
    WalkConfig cfg;
    cfg.steps = 1000000;
    cfg.seed = 3;
    cfg.selection = sel;
    const auto s = random_walk(g, cfg);
    for (const auto& v : g.vertices)
      if ((v.kind == VertexKind::Jacobian) != (sel == Selection::Jacobian)) CHECK(s.visits[v.id] == 0);
    CHECK(s.product_hits == (sel == Selection::Product ? cfg.steps : 0));
    const auto h = select(g, sel);
    const auto m = transition_matrix(h.digraph());
    const auto phi = stationary_closed_form(m);
    CHECK(s.total_variation < tv_band(m, phi, cfg.steps));
  }
  WalkConfig bad;
  bad.selection = Selection::Jacobian;
  bad.start = g.vertices.front().id;  // the seed vertex is a product
  CHECK_THROWS_AS(random_walk(g, bad), PreconditionError);
}

TEST_CASE("long walks approach the stationary distribution") {
  for (u32 p : {17u, 41u}) {
    const auto g = build_graph(p);
    WalkConfig cfg;
    cfg.steps = 1000000;
    cfg.seed = 11;
    const auto s = random_walk(g, cfg);
    const auto m = transition_matrix(g.digraph());
    const auto phi = stationary_closed_form(m);
    INFO("p = " << p);
    CHECK(s.total_variation < tv_band(m, phi, cfg.steps));
    // Ten times the steps: the error shrinks like 1 / sqrt(n).
    cfg.steps *= 10;
    CHECK(random_walk(g, cfg).total_variation < tv_band(m, phi, cfg.steps));
  }
}

TEST_CASE("product frequency at p = 101") {
  const auto g = build_graph(101);
  WalkConfig cfg;
  cfg.steps = 100000;
  cfg.seed = 1;
  const auto s = random_walk(g, cfg);
  const double mass = static_cast<double>(s.expected_product_mass);
  CHECK(mass >= 3.0 / 101);
  CHECK(mass <= 7.0 / 101);
  CHECK(std::abs(s.product_ratio - mass) <= 4 * s.product_sigma);
  CHECK(s.scaled_ratio > 3);
  CHECK(s.scaled_ratio < 7);
}

TEST_CASE("exact distributions respect the mixing bound") {
  SUBCASE("zero steps") {
    const auto g = build_graph(11);
    const auto c = empirical_distribution_check(g, Selection::Full, 2, 0);
    const auto m = transition_matrix(g.digraph());
    const auto phi = stationary_closed_form(m);
    CHECK(c.max_deviation[0] >= 1 - phi.values[2] - 1e-15);
    CHECK(c.ok());
  }
  SUBCASE("p = 11 after 20 steps") {
    const auto c = empirical_distribution_check(build_graph(11), Selection::Full, 0, 20);
    CHECK(c.max_deviation[20] < 1e-2);
    CHECK(c.ok());
  }
  SUBCASE("every start, every selection, p <= 41") {
    for (u32 p : {13u, 17u, 23u, 41u}) {
      const auto g = build_graph(p);
      for (auto sel : {Selection::Full, Selection::Jacobian, Selection::Product}) {
        for (const auto& v : g.vertices) {
          if (sel != Selection::Full && (v.kind == VertexKind::Jacobian) != (sel == Selection::Jacobian)) continue;
          const auto c = empirical_distribution_check(g, sel, v.id, 25);
          INFO("p = " << p << ", start " << v.id << ", " << selection_name(sel));
          CHECK(c.ok());
        }
      }
    }
  }
  SUBCASE("deviations decay at rate lambda_star") {
    const auto c = empirical_distribution_check(build_graph(41), Selection::Full, 0, 80);
    const double rate = std::pow(c.max_deviation[80] / c.max_deviation[40], 1.0 / 40);
    CHECK(rate <= c.lambda_star * (1 + 1e-6));
    CHECK(rate >= 0.9 * c.lambda_star);
  }
}

TEST_CASE("selection names") {
  for (auto s : {Selection::Full, Selection::Jacobian, Selection::Product}) CHECK(parse_selection(selection_name(s)) == s);
  CHECK_THROWS_AS(parse_selection("elliptic"), PreconditionError);
}
