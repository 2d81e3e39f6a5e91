#include "ssg/experiments.hpp"

#include <cstdio>
#include <sstream>

namespace ssg {

namespace {

std::vector<int> ids_of(const SuperspecialGraph& g, std::optional<VertexKind> k) {
  std::vector<int> out;
  for (const auto& v : g.vertices)
    if (!k || v.kind == *k) out.push_back(v.id);
  return out;
}

SpectralReport block_spectrum(const SuperspecialGraph& g, std::optional<VertexKind> k, SpectralOptions opt) {
  const auto m = restricted_transition_matrix(g.digraph(), ids_of(g, k));
  return lambda_star(m, stationary_closed_form(m), opt);
}

std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace

SpectraRow spectra_row(const SuperspecialGraph& g, SpectralOptions opt) {
  SpectraRow r;
  r.p = g.p;
  r.vertices = static_cast<int>(g.vertices.size());
  r.d_full = diameter(g.digraph());
  r.d_jacobian = diameter(subgraph(g, VertexKind::Jacobian).digraph());
  r.d_product = diameter(subgraph(g, VertexKind::Product).digraph());
  r.full = block_spectrum(g, std::nullopt, opt);
  r.jacobian = block_spectrum(g, VertexKind::Jacobian, opt);
  r.product = block_spectrum(g, VertexKind::Product, opt);
  return r;
}

std::string spectra_csv_header() { return "p,vertices,d_G,d_J,d_E,lambda_G,lambda_J,lambda_E\n"; }

std::string spectra_csv_line(const SpectraRow& r) {
  auto d = [](const std::optional<int>& x) { return x ? std::to_string(*x) : std::string("inf"); };
  std::ostringstream os;
  os << r.p << "," << r.vertices << "," << d(r.d_full) << "," << d(r.d_jacobian) << "," << d(r.d_product) << ","
     << fmt3(r.full.scaled) << "," << fmt3(r.jacobian.scaled) << "," << fmt3(r.product.scaled) << "\n";
  return os.str();
}

std::vector<Check> verify_graph(const SuperspecialGraph& g, bool extended) {
  std::vector<Check> out;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  {
    int bad = 0;
    for (int d : g.out_degree()) bad += d != 15;
    add("out-weights sum to 15", bad == 0, std::to_string(bad) + " vertices off");
  }
  {
    const auto v = ratio_principle_violations(g);
    add("ratio principle", v.empty(), std::to_string(v.size()) + " violating pairs");
  }
  {
    const auto c = census(g);
    std::string detail;
    for (RAType t : kAllRATypes) {
      const int obs = c.observed.count(t) ? c.observed.at(t) : 0;
      if (Rational(obs) != c.expected.at(t))
        detail += ra_name(t) + ": " + std::to_string(obs) + " vs " + c.expected.at(t).str() + "; ";
    }
    add("census", c.matches(), c.integral ? detail : "non-integral closed form");
  }
  for (auto sel : {std::optional<VertexKind>{}, std::optional{VertexKind::Jacobian}, std::optional{VertexKind::Product}}) {
    const auto h = sel ? subgraph(g, *sel) : g;
    const std::string name = sel ? kind_name(*sel) + " subgraph" : "full graph";
    const auto m = transition_matrix(h.digraph());
    const auto phi = stationary_closed_form(m);
    add("stationarity, " + name, m.excluded.empty() && is_stationary(m, phi.exact));
    add("detailed balance, " + name, detailed_balance(m, phi.exact));
    const auto d = h.digraph();
    const bool sc = strongly_connected(d);
    add("strongly connected, " + name, sc);
    add("aperiodic, " + name, sc && period(d) == 1);
  }
  add("Richelot identity", g.stats.identity_failures == 0,
      std::to_string(g.stats.identity_failures) + " of " + std::to_string(g.stats.identity_checks) + " failed");
  {
    long checked = 0;
    const long fails = dual_round_trip_failures(g, &checked);
    add("dual round trip", fails == 0, std::to_string(fails) + " of " + std::to_string(checked) + " failed");
  }
  {
    int bad = 0;
    for (const auto& v : g.vertices) bad += v.ra_order != v.action_order;
    add("classifier agrees with automorphism action", bad == 0, std::to_string(bad) + " vertices disagree");
  }
  {
    const auto dG = diameter(g.digraph()), dJ = diameter(subgraph(g, VertexKind::Jacobian).digraph());
    const bool ok = dG && dJ && *dG - 2 <= *dJ && *dJ <= 2 * *dG;
    add("diameter inequalities", ok,
        "d(G) = " + (dG ? std::to_string(*dG) : "inf") + ", d(J) = " + (dJ ? std::to_string(*dJ) : "inf"));
  }
  if (extended) {
    const auto rep = dual_transport_check(g);
    add("per-edge dual transport", rep.failures.empty(),
        std::to_string(rep.failures.size()) + " of " + std::to_string(rep.checked) + " failed" +
            (rep.failures.empty() ? "" : "; first: " + rep.failures.front()));
  }
  return out;
}

std::string summary(const SuperspecialGraph& g) {
  std::ostringstream os;
  const auto c = census(g);
  long jac = 0;
  for (const auto& v : g.vertices) jac += v.kind == VertexKind::Jacobian;
  os << "p = " << g.p << ", seed " << g.seed << "\n";
  os << "vertices: " << g.vertices.size() << " (" << jac << " Jacobians, " << g.vertices.size() - jac
     << " products), edges: " << g.edges.size() << "\n";
  os << "eps1 = " << c.eps1 << ", eps2 = " << c.eps2 << ", eps3 = " << c.eps3 << ", eps5 = " << c.eps5
     << ", N = " << c.n_p << "\n";
  os << "type        #RA  observed  expected\n";
  for (RAType t : kAllRATypes) {
    const int obs = c.observed.count(t) ? c.observed.at(t) : 0;
    char line[96];
    std::snprintf(line, sizeof line, "%-10s %4d  %8d  %8s%s\n", ra_name(t).c_str(), ra_order(t), obs,
                  c.expected.at(t).str().c_str(), Rational(obs) == c.expected.at(t) ? "" : "  MISMATCH");
    os << line;
  }
  os << "field degrees of stored models:";
  for (const auto& [k, n] : g.stats.ext_degree_histogram) os << " " << k << ":" << n;
  os << "\n";
  return os.str();
}

}  // namespace ssg
