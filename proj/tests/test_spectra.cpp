#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "ssg/elliptic.hpp"
#include "ssg/errors.hpp"
#include "ssg/graph.hpp"
#include "ssg/spectra.hpp"

using namespace ssg;

namespace {

std::vector<int> kind_ids(const SuperspecialGraph& g, VertexKind k) {
  std::vector<int> out;
  for (const auto& v : g.vertices)
    if (v.kind == k) out.push_back(v.id);
  return out;
}

SpectralReport spectrum(const SuperspecialGraph& g, std::optional<VertexKind> k, SpectralOptions opt = {}) {
  const auto d = g.digraph();
  std::vector<int> keep;
  if (k)
    keep = kind_ids(g, *k);
  else
    for (int v = 0; v < d.size(); ++v) keep.push_back(v);
  const auto m = restricted_transition_matrix(d, keep);
  return lambda_star(m, stationary_closed_form(m), opt);
}

// Kernel of (M - I) by exact Gaussian elimination, normalized to sum 1.
std::vector<Rational> stationary_by_elimination(const TransitionMatrix& m) {
  const int n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) a[v][u] = m.entry(v, u) - (u == v ? 1 : 0);
  // Replace the last equation by sum(x) = 1.
  for (int u = 0; u < n; ++u) a[n - 1][u] = 1;
  a[n - 1][n] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (int k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<Rational> x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

std::vector<double> eigen_oracle(const TransitionMatrix& m) {
  const auto d = m.dense();
  const int n = m.size();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d[static_cast<std::size_t>(i) * n + j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(es.eigenvalues()[i].imag()) < 1e-9);
    out.push_back(es.eigenvalues()[i].real());
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

TEST_CASE("transition matrix at p = 11") {
  const auto g = build_graph(11);
  const auto m = transition_matrix(g.digraph());
  REQUIRE(m.size() == 5);
  CHECK(m.columns_stochastic());
  for (const auto& e : g.edges) {
    long w = 0;
    for (const auto& f : g.edges)
      if (f.src == e.src && f.dst == e.dst) w += f.weight;
    CHECK(m.entry(e.dst, e.src) == Rational(w, 15));
    CHECK(15 % boost::multiprecision::denominator(m.entry(e.dst, e.src)) == 0);
  }
}

TEST_CASE("one vertex with a loop") {
  WeightedDigraph d;
  d.ra_order = {3};
  d.arcs = {{0, 0, 7}};
  const auto m = transition_matrix(d);
  CHECK(m.entry(0, 0) == 1);
  const auto phi = stationary_closed_form(m);
  CHECK(phi.exact[0] == 1);
  CHECK(diameter(d) == 0);
  CHECK(lambda_star(m, phi).lambda_star == 0);
}

TEST_CASE("zero out-degree vertices are dropped from a walk") {
  WeightedDigraph d;
  d.ra_order = {1, 1, 1};
  d.arcs = {{0, 1, 1}, {1, 0, 1}, {2, 0, 1}};
  const auto sub = WeightedDigraph{{1, 1, 1}, {{0, 1, 1}, {1, 0, 1}}};
  const auto m = transition_matrix(sub);
  CHECK(m.size() == 2);
  CHECK(m.excluded == std::vector<int>{2});
  CHECK(transition_matrix(d).size() == 3);
}

TEST_CASE("closed-form stationary distribution at p = 11") {
  const auto g = build_graph(11);
  const auto m = transition_matrix(g.digraph());
  const auto phi = stationary_closed_form(m);
  Rational total = 0;
  for (const auto& v : g.vertices) total += Rational(15, v.ra_order);
  for (const auto& v : g.vertices) CHECK(phi.exact[v.id] == Rational(15, v.ra_order) / total);
  CHECK(is_stationary(m, phi.exact));
  CHECK(detailed_balance(m, phi.exact));
}

TEST_CASE("closed form agrees with exact elimination on every graph and subgraph") {
  for (u32 p : {11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
    const auto g = build_graph(p);
    for (auto which : {0, 1, 2}) {
      const auto h = which == 0 ? g : subgraph(g, which == 1 ? VertexKind::Jacobian : VertexKind::Product);
      const auto m = transition_matrix(h.digraph());
      INFO("p = " << p << ", graph " << which);
      REQUIRE(m.excluded.empty());
      const auto phi = stationary_closed_form(m);
      CHECK(is_stationary(m, phi.exact));
      CHECK(detailed_balance(m, phi.exact));
      CHECK(phi.exact == stationary_by_elimination(m));
    }
  }
}

TEST_CASE("elliptic graph stationary distribution and imbalance") {
  for (u32 p : {23u, 47u, 59u, 71u, 83u, 107u}) {
    const auto g1 = build_gamma1(p);
    const auto m = transition_matrix(g1.graph);
    CHECK(is_stationary(m, stationary_closed_form(m).exact));
    std::vector<int> cls;
    const auto K = ExtField::base_field(p);
    for (const auto& j : g1.j_list) cls.push_back(j.is_zero() ? 1 : j == K->from_int(1728) ? 2 : 0);
    const auto spec = imbalance_spec(g1.graph, cls, 3);
    CHECK(*spec.ratio[1][0] == 3);
    CHECK(*spec.ratio[2][0] == 2);
    const auto r = linear_imbalance_solve(spec);
    INFO("p = " << p << ": " << r.diagnostic);
    REQUIRE(r.composable);
    CHECK(r.alpha == std::vector<Rational>{1, Rational(1, 3), Rational(1, 2)});
  }
}

TEST_CASE("linear imbalance solver") {
  using O = std::optional<Rational>;
  SUBCASE("undirected case gives degrees") {
    LinearImbalanceSpec s{{3, 5, 4}, {{O{1}, O{1}, O{}}, {O{1}, O{1}, O{1}}, {O{}, O{1}, O{1}}}};
    const auto r = linear_imbalance_solve(s);
    REQUIRE(r.composable);
    CHECK(r.alpha == std::vector<Rational>{1, Rational(5, 3), Rational(4, 3)});
  }
  SUBCASE("ratios from class weights give d_i / g_i") {
    const std::vector<Rational> g{2, 7, 3}, d{4, 6, 5};
    LinearImbalanceSpec s{d, {}};
    s.ratio.assign(3, std::vector<O>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s.ratio[i][j] = g[i] / g[j];
    const auto r = linear_imbalance_solve(s);
    REQUIRE(r.composable);
    for (int i = 0; i < 3; ++i) CHECK(r.alpha[i] == (d[i] / g[i]) / (d[0] / g[0]));
  }
  SUBCASE("inconsistent triangle") {
    LinearImbalanceSpec s{{3, 3, 3},
                          {{O{1}, O{2}, O{3}}, {O{Rational(1, 2)}, O{1}, O{5}}, {O{Rational(1, 3)}, O{Rational(1, 5)}, O{1}}}};
    const auto r = linear_imbalance_solve(s);
    CHECK_FALSE(r.composable);
    CHECK(r.diagnostic.find("not composable") != std::string::npos);
  }
}

TEST_CASE("p = 11 adjacency eigenvalue") {
  const auto r = spectrum(build_graph(11), std::nullopt);
  CHECK(std::abs(15 * r.lambda2 - (7 + std::sqrt(3.0))) < 1e-9);
  CHECK(15 * r.lambda2 > 2 * std::sqrt(14.0));
  CHECK(r.converged);
}

TEST_CASE("Jacobi agrees with a general eigensolver") {
  for (u32 p : {17u, 41u}) {
    const auto g = build_graph(p);
    for (auto k : {std::optional<VertexKind>{}, std::optional{VertexKind::Jacobian}, std::optional{VertexKind::Product}}) {
      const auto d = g.digraph();
      std::vector<int> keep;
      for (const auto& v : g.vertices)
        if (!k || v.kind == *k) keep.push_back(v.id);
      const auto m = restricted_transition_matrix(d, keep);
      auto s = symmetrized(m, stationary_closed_form(m));
      std::vector<double> eig;
      jacobi_eigenvalues(s, m.size(), eig);
      std::sort(eig.begin(), eig.end(), std::greater<>());
      const auto ref = eigen_oracle(m);
      for (int i = 0; i < m.size(); ++i) CHECK(eig[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("Lanczos agrees with Jacobi") {
  SpectralOptions force;
  force.dense_threshold = 0;
  for (u32 p : {41u, 61u, 101u}) {
    const auto g = build_graph(p);
    for (auto k : {std::optional<VertexKind>{}, std::optional{VertexKind::Jacobian}, std::optional{VertexKind::Product}}) {
      const auto a = spectrum(g, k), b = spectrum(g, k, force);
      INFO("p = " << p);
      CHECK(b.method == "lanczos");
      CHECK(b.converged);
      CHECK(std::abs(a.lambda2 - b.lambda2) < 1e-6);
      CHECK(std::abs(a.lambda_min - b.lambda_min) < 1e-6);
      CHECK(std::abs(a.lambda1 - b.lambda1) < 1e-6);
    }
  }
}

TEST_CASE("reference diameters and eigenvalues") {
  struct Row {
    u32 p;
    int dG, dJ, dE;
    double lG, lJ, lE;
  };
  for (const Row& row : {Row{17, 3, 3, 2, 10.671, 9.203, 3.000}, Row{19, 3, 3, 1, 11.072, 10.016, 1.833},
                         Row{41, 5, 5, 6, 11.436, 10.098, 7.837}, Row{101, 6, 6, 7, 11.192, 10.817, 8.474}}) {
    INFO("p = " << row.p);
    const auto g = build_graph(row.p);
    CHECK(diameter(g.digraph()) == row.dG);
    CHECK(diameter(subgraph(g, VertexKind::Jacobian).digraph()) == row.dJ);
    CHECK(diameter(subgraph(g, VertexKind::Product).digraph()) == row.dE);
    CHECK(std::abs(spectrum(g, std::nullopt).scaled - row.lG) <= 5e-3);
    CHECK(std::abs(spectrum(g, VertexKind::Jacobian).scaled - row.lJ) <= 5e-3);
    CHECK(std::abs(spectrum(g, VertexKind::Product).scaled - row.lE) <= 5e-3);
  }
}

TEST_CASE("elliptic products at p = 19 are pairwise adjacent") {
  // j = 1728 and j = 7 are 2-isogenous, so every pair of the three products is
  // joined by a product kernel, so d(E) = 1.
  const auto E = subgraph(build_graph(19), VertexKind::Product);
  REQUIRE(E.vertices.size() == 3);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      bool adjacent = false;
      for (const auto& e : E.edges) adjacent = adjacent || (e.src == u && e.dst == v);
      CHECK(adjacent);
    }
  CHECK(diameter(E.digraph()) == 1);
}

TEST_CASE("structure") {
  WeightedDigraph two{{1, 1}, {{0, 1, 1}, {1, 0, 1}}};
  CHECK(period(two) == 2);
  WeightedDigraph split{{1, 1}, {{0, 0, 1}, {1, 1, 1}}};
  CHECK_FALSE(strongly_connected(split));
  CHECK_FALSE(diameter(split).has_value());
  for (u32 p : {11u, 17u, 29u, 41u, 53u}) {
    const auto g = build_graph(p);
    const auto J = subgraph(g, VertexKind::Jacobian).digraph(), E = subgraph(g, VertexKind::Product).digraph();
    INFO("p = " << p);
    for (const auto& d : {g.digraph(), J, E}) {
      CHECK(strongly_connected(d));
      CHECK(period(d) == 1);
    }
    const int dG = *diameter(g.digraph()), dJ = *diameter(J);
    CHECK(dG - 2 <= dJ);
    CHECK(dJ <= 2 * dG);
  }
}

TEST_CASE("mixing bound and convergence") {
  const auto g = build_graph(17);
  const auto m = transition_matrix(g.digraph());
  const auto phi = stationary_closed_form(m);
  const double ls = lambda_star(m, phi).lambda_star;
  CHECK(mixing_bound(m, ls, 3, 3, 0) == doctest::Approx(1.0));
  for (int n = 1; n < 30; ++n) CHECK(mixing_bound(m, ls, 0, 4, n) < mixing_bound(m, ls, 0, 4, n - 1));

  std::vector<double> x(m.size(), 0.0);
  x[0] = 1;
  const int limit = static_cast<int>(std::ceil(3 * std::log(1e9) / std::log(1 / ls))) + 10;
  int steps = 0;
  for (;; ++steps) {
    double tv = 0;
    for (int v = 0; v < m.size(); ++v) tv += std::abs(x[v] - phi.values[v]);
    if (tv / 2 < 1e-9) break;
    REQUIRE(steps < limit);
    x = m.apply(x);
  }
  CHECK(steps > 0);
}
