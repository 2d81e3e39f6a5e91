#include "ssg/walk.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ssg/errors.hpp"

namespace ssg {

std::string selection_name(Selection s) {
  switch (s) {
    case Selection::Full: return "full";
    case Selection::Jacobian: return "jacobian";
    case Selection::Product: return "product";
  }
  return "full";
}

Selection parse_selection(const std::string& s) {
  if (s == "full") return Selection::Full;
  if (s == "jacobian") return Selection::Jacobian;
  if (s == "product") return Selection::Product;
  throw PreconditionError("unknown subgraph '" + s + "' (expected full, jacobian or product)");
}

SuperspecialGraph select(const SuperspecialGraph& g, Selection s) {
  if (s == Selection::Full) return g;
  return subgraph(g, s == Selection::Jacobian ? VertexKind::Jacobian : VertexKind::Product);
}

namespace {

struct Walker {
  SuperspecialGraph h;
  std::vector<int> original;  // id in g for each vertex of h
  TransitionMatrix m;
  StationaryDistribution phi;
};

Walker prepare(const SuperspecialGraph& g, Selection s) {
  Walker w;
  w.h = select(g, s);
  for (const auto& v : g.vertices)
    if (s == Selection::Full || (v.kind == VertexKind::Jacobian) == (s == Selection::Jacobian))
      w.original.push_back(v.id);
  SSG_CHECK(w.original.size() == w.h.vertices.size(), "selection bookkeeping");
  w.m = transition_matrix(w.h.digraph());
  if (!w.m.excluded.empty()) throw InvariantError("selected subgraph has vertices with no way out");
  w.phi = stationary_closed_form(w.m);
  return w;
}

int local_index(const Walker& w, int id) {
  for (int i = 0; i < static_cast<int>(w.original.size()); ++i)
    if (w.original[i] == id) return i;
  throw PreconditionError("start vertex " + std::to_string(id) + " is not in the selected graph");
}

// Unbiased integer in [0, n) from raw generator output.
u64 uniform_below(std::mt19937_64& rng, u64 n) {
  const u64 limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  u64 x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

}  // namespace

WalkStats random_walk(const SuperspecialGraph& g, const WalkConfig& cfg) {
  if (cfg.steps < 1) throw PreconditionError("a walk needs at least one step");
  const Walker w = prepare(g, cfg.selection);
  WalkStats s;
  s.p = g.p;
  s.steps = cfg.steps;
  s.seed = cfg.seed;
  s.selection = cfg.selection;
  int u = cfg.start ? local_index(w, *cfg.start) : 0;
  s.start = w.original[u];
  s.visits.assign(g.vertices.size(), 0);

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(cfg.walk_index), static_cast<std::uint32_t>(cfg.walk_index >> 32)};
  std::mt19937_64 rng(seq);
  for (long t = 0; t < cfg.steps; ++t) {
    long r = static_cast<long>(uniform_below(rng, static_cast<u64>(w.m.degree[u])));
    for (const auto& [v, wt] : w.m.cols[u]) {
      if (r < wt) {
        u = v;
        break;
      }
      r -= wt;
    }
    const int id = w.original[u];
    ++s.visits[id];
    if (g.vertices[id].kind == VertexKind::Product) ++s.product_hits;
    if (cfg.record) s.trajectory.push_back(id);
  }
  s.product_ratio = static_cast<double>(s.product_hits) / s.steps;
  s.scaled_ratio = s.product_ratio * g.p;
  for (int i = 0; i < w.m.size(); ++i)
    if (g.vertices[w.original[i]].kind == VertexKind::Product) s.expected_product_mass += w.phi.exact[i];
  const double mass = static_cast<double>(s.expected_product_mass);
  const double l2 = std::max(0.0, lambda_star(w.m, w.phi).lambda2);
  s.product_sigma = std::sqrt(mass * (1 - mass) / s.steps * (1 + l2) / (1 - l2));
  double tv = 0;
  for (int i = 0; i < w.m.size(); ++i)
    tv += std::abs(static_cast<double>(s.visits[w.original[i]]) / s.steps - w.phi.values[i]);
  s.total_variation = tv / 2;
  return s;
}

std::string walk_json(const SuperspecialGraph& g, const WalkStats& s) {
  nlohmann::json j;
  j["p"] = s.p;
  j["seed"] = s.seed;
  j["steps"] = s.steps;
  j["subgraph"] = selection_name(s.selection);
  j["start"] = s.start;
  j["visits"] = s.visits;
  j["product_hits"] = s.product_hits;
  j["product_ratio"] = s.product_ratio;
  j["scaled_ratio"] = s.scaled_ratio;
  j["expected_product_mass"] = s.expected_product_mass.str();
  j["expected_product_mass_float"] = static_cast<double>(s.expected_product_mass);
  j["product_sigma"] = s.product_sigma;
  j["total_variation"] = s.total_variation;
  j["vertices"] = static_cast<int>(g.vertices.size());
  return j.dump(1);
}

std::string walk_csv(const SuperspecialGraph& g, const WalkStats& s) {
  std::ostringstream os;
  os << "step,vertex,kind\n";
  for (std::size_t t = 0; t < s.trajectory.size(); ++t)
    os << t + 1 << "," << s.trajectory[t] << "," << kind_name(g.vertices[s.trajectory[t]].kind) << "\n";
  return os.str();
}

DistributionCheck empirical_distribution_check(const SuperspecialGraph& g, Selection sel, int start, int n) {
  if (n < 0) throw PreconditionError("negative step count");
  const Walker w = prepare(g, sel);
  DistributionCheck c;
  const int u = local_index(w, start);
  c.start = start;
  c.lambda_star = lambda_star(w.m, w.phi).lambda_star;
  std::vector<Rational> x(w.m.size(), Rational(0));
  x[u] = 1;
  for (int k = 0; k <= n; ++k) {
    double dev = 0, worst = 0;
    for (int v = 0; v < w.m.size(); ++v) {
      const double d = std::abs(static_cast<double>(x[v] - w.phi.exact[v]));
      // Small slack for the floating-point lambda_star.
      const double bound = mixing_bound(w.m, c.lambda_star, u, v, k) * (1 + 1e-9) + 1e-15;
      dev = std::max(dev, d);
      worst = std::max(worst, d / bound);
      if (d > bound) ++c.violations;
    }
    c.max_deviation.push_back(dev);
    c.worst_ratio.push_back(worst);
    if (k < n) x = w.m.apply(x);
  }
  return c;
}

}  // namespace ssg
