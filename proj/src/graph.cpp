#include "ssg/graph.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ssg/errors.hpp"

namespace ssg {

namespace {

using KernelPerm = std::array<int, 15>;

Pairing normalize(Pairing pr) {
  for (auto& pair : pr)
    if (pair[0] > pair[1]) std::swap(pair[0], pair[1]);
  std::sort(pr.begin(), pr.end());
  return pr;
}

int pairing_index(const Pairing& pr) {
  static const std::map<Pairing, int> index = [] {
    std::map<Pairing, int> m;
    const auto& all = all_pairings();
    for (int i = 0; i < static_cast<int>(all.size()); ++i) m[all[i]] = i;
    return m;
  }();
  return index.at(normalize(pr));
}

int product_kernel_index(const ProductKernel& k) {
  if (!k.gluing) return 3 * k.i + k.j;
  const auto& all = product_kernels();
  for (int i = 9; i < 15; ++i)
    if (all[i].pi == k.pi) return i;
  throw InvariantError("unknown gluing permutation");
}

Perm3 compose(const Perm3& a, const Perm3& b) {  // a after b
  return {a[b[0]], a[b[1]], a[b[2]]};
}

Perm3 inverse(const Perm3& a) {
  Perm3 r{};
  for (int i = 0; i < 3; ++i) r[a[i]] = i;
  return r;
}

// Image of a product kernel under (alpha on E, beta on E').
ProductKernel act(const ProductKernel& k, const Perm3& alpha, const Perm3& beta) {
  if (!k.gluing) return {false, alpha[k.i], beta[k.j], {0, 1, 2}};
  return {true, 0, 0, compose(beta, compose(k.pi, inverse(alpha)))};
}

// Image under the factor swap composed with gamma^-1 x gamma, g = root map of gamma.
ProductKernel act_swap(const ProductKernel& k, const Perm3& g) {
  if (!k.gluing) return {false, inverse(g)[k.j], g[k.i], {0, 1, 2}};
  return {true, 0, 0, compose(g, compose(inverse(k.pi), g))};
}

KernelPerm product_perm(const std::function<ProductKernel(const ProductKernel&)>& f) {
  KernelPerm out{};
  const auto& all = product_kernels();
  for (int i = 0; i < 15; ++i) out[i] = product_kernel_index(f(all[i]));
  return out;
}

SurfaceModel canonical_product_model(const VertexKey& key, u32 p) {
  auto K = ExtField::base_field(p);
  return SurfaceModel::elliptic_pair(two_torsion_model(K->from_fp2(key.vals[0])),
                                     two_torsion_model(K->from_fp2(key.vals[1])));
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::string kind_name(VertexKind k) { return k == VertexKind::Jacobian ? "jacobian" : "product"; }

WeightedDigraph SuperspecialGraph::digraph() const {
  WeightedDigraph d;
  for (const auto& v : vertices) d.ra_order.push_back(v.ra_order);
  for (const auto& e : edges) d.arcs.push_back({e.src, e.dst, e.weight});
  return d;
}

std::vector<std::array<int, 15>> SuperspecialGraph::kernel_edge_table() const {
  std::vector<std::array<int, 15>> t(vertices.size());
  for (auto& row : t) row.fill(-1);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    for (int k : edges[e].kernels) t[edges[e].src][k] = e;
  return t;
}

std::optional<int> SuperspecialGraph::find(const VertexKey& k) const {
  for (const auto& v : vertices)
    if (v.key == k) return v.id;
  return std::nullopt;
}

std::pair<std::vector<KernelPerm>, int> kernel_action(const SurfaceModel& m) {
  std::vector<KernelPerm> gens;
  if (!m.product) {
    const auto group = moebius_group(m.curve.roots);
    const auto& all = all_pairings();
    for (const auto& g : group) {
      KernelPerm kp{};
      for (int i = 0; i < 15; ++i) {
        Pairing img{};
        for (int t = 0; t < 3; ++t) img[t] = {g.perm[all[i][t][0]], g.perm[all[i][t][1]]};
        kp[i] = pairing_index(img);
      }
      gens.push_back(kp);
    }
    return {gens, static_cast<int>(group.size())};
  }
  const auto a1 = reduced_automorphisms(m.e1), a2 = reduced_automorphisms(m.e2);
  const Perm3 id{0, 1, 2};
  for (const auto& a : a1) gens.push_back(product_perm([&](const ProductKernel& k) { return act(k, a, id); }));
  for (const auto& b : a2) gens.push_back(product_perm([&](const ProductKernel& k) { return act(k, id, b); }));
  int order = 2 * static_cast<int>(a1.size() * a2.size());
  if (m.e1.j() == m.e2.j()) {
    const auto matches = affine_matches(m.e1, m.e2);
    SSG_CHECK(!matches.empty(), "equal j-invariants without an affine match");
    const Perm3 g = matches.front();
    gens.push_back(product_perm([&](const ProductKernel& k) { return act_swap(k, g); }));
    order *= 2;
  }
  return {gens, order};
}

std::vector<EdgeRecord> compute_weights(const SurfaceModel& m, const std::vector<IsogenyStep>& steps) {
  SSG_CHECK(steps.size() == 15, "expected 15 isogeny steps");
  const auto [gens, order] = kernel_action(m);
  std::vector<int> parent(15);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& g : gens)
    for (int i = 0; i < 15; ++i) parent[find_root(parent, i)] = find_root(parent, g[i]);
  std::map<int, EdgeRecord> orbits;
  for (int i = 0; i < 15; ++i) {
    auto& e = orbits[find_root(parent, i)];
    e.kernels.push_back(i);
  }
  std::vector<EdgeRecord> out;
  for (auto& [root, e] : orbits) {
    e.weight = static_cast<int>(e.kernels.size());
    e.dual_hint = steps[e.kernels.front()];
    for (int k : e.kernels)
      SSG_CHECK(steps[k].key == e.dual_hint.key, "RA-orbit of kernels with different codomains");
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const EdgeRecord& a, const EdgeRecord& b) { return a.kernels < b.kernels; });
  return out;
}

SuperspecialGraph build_graph(u32 p, std::optional<std::pair<JInvariant, JInvariant>> seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const long fallbacks0 = two_torsion_fallbacks();
  QuadExtField::build(p);  // precondition check
  SuperspecialGraph g;
  g.p = p;
  if (!seed) {
    const JInvariant j = enumerate_supersingular(p).j_list.front();
    seed = std::pair{j, j};
  }
  for (const auto& j : {seed->first, seed->second})
    if (!is_supersingular(j)) throw PreconditionError("seed j = " + j.to_string() + " is not supersingular");
  g.seed = "E(" + seed->first.to_string() + ") x E(" + seed->second.to_string() + ")";

  std::map<VertexKey, int> index;
  auto add_vertex = [&](const VertexKey& key, const SurfaceModel& arrived) {
    VertexRecord v;
    v.id = static_cast<int>(g.vertices.size());
    v.key = key;
    if (key.is_product()) {
      v.kind = VertexKind::Product;
      v.model = canonical_product_model(key, p);
      auto K = ExtField::base_field(p);
      v.type = product_type(K->from_fp2(key.vals[0]), K->from_fp2(key.vals[1]));
      g.stats.ext_degree_histogram[std::max(v.model.e1.field->degree(), v.model.e2.field->degree())]++;
    } else {
      v.kind = VertexKind::Jacobian;
      v.model = arrived;
      v.type = bolza_type(clebsch_invariants(v.model.curve.f));
      g.stats.ext_degree_histogram[v.model.curve.field->degree()]++;
    }
    v.ra_order = ra_order(v.type);
    v.action_order = kernel_action(v.model).second;
    index[key] = v.id;
    g.vertices.push_back(std::move(v));
    return g.vertices.back().id;
  };

  const SurfaceModel start = SurfaceModel::elliptic_pair(two_torsion_model(seed->first), two_torsion_model(seed->second));
  add_vertex(surface_key(start), start);
  for (std::size_t cur = 0; cur < g.vertices.size(); ++cur) {
    const SurfaceModel model = g.vertices[cur].model;
    const auto steps = expand_surface(model);
    for (const auto& st : steps) {
      if (st.identity_ok) {
        ++g.stats.identity_checks;
        g.stats.identity_failures += !*st.identity_ok;
      }
      g.stats.split_steps += st.split;
      g.stats.isomorphism_loops += st.isomorphism_loop;
    }
    for (auto& e : compute_weights(model, steps)) {
      e.src = static_cast<int>(cur);
      auto it = index.find(e.dual_hint.key);
      e.dst = it != index.end() ? it->second : add_vertex(e.dual_hint.key, e.dual_hint.codomain);
      g.edges.push_back(std::move(e));
    }
  }
  g.stats.model_fallbacks = two_torsion_fallbacks() - fallbacks0;
  g.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

// ---------------------------------------------------------------------------
// Census

bool CensusReport::matches() const {
  if (!integral) return false;
  for (RAType t : kAllRATypes) {
    auto it = observed.find(t);
    const int obs = it == observed.end() ? 0 : it->second;
    if (Rational(obs) != expected.at(t)) return false;
  }
  return true;
}

CensusReport expected_census(u32 p) {
  if (p < 7 || !is_prime(p)) throw PreconditionError("census needs a prime p >= 7");
  CensusReport r;
  r.p = p;
  r.eps1 = p % 4 == 3;
  r.eps2 = p % 8 == 5 || p % 8 == 7;
  r.eps3 = p % 3 == 2;
  r.eps5 = p % 5 == 4;
  const Rational P(p), e1(r.eps1), e2(r.eps2), e3(r.eps3), e5(r.eps5);
  const Rational N = (P - 1) / 12 - e1 / 2 - e3 / 3;
  auto& x = r.expected;
  x[RAType::A] = (P - 1) * (P * P - 35 * P + 346) / 2880 - e1 / 16 - e2 / 4 - 2 * e3 / 9 - e5 / 5;
  x[RAType::I] = (P - 1) * (P - 17) / 48 + e1 / 4 + e2 + e3;
  x[RAType::II] = e5;
  x[RAType::III] = 3 * N / 2 + e1 / 2 - e2 / 2 - e3 / 2;
  x[RAType::IV] = 2 * N + e1 - e2;
  x[RAType::V] = e3;
  x[RAType::VI] = e2;
  x[RAType::Pi] = N * (N - 1) / 2;
  x[RAType::Pi0] = e3 * N;
  x[RAType::Pi1728] = e1 * N;
  x[RAType::Pi0_1728] = e1 * e3;
  x[RAType::Sigma] = N;
  x[RAType::Sigma0] = e3;
  x[RAType::Sigma1728] = e1;
  r.integral = boost::multiprecision::denominator(N) == 1;
  for (const auto& [t, v] : x) r.integral = r.integral && boost::multiprecision::denominator(v) == 1;
  r.n_p = r.integral ? static_cast<int>(boost::multiprecision::numerator(N)) : -1;
  return r;
}

CensusReport census(const SuperspecialGraph& g) {
  CensusReport r = expected_census(g.p);
  for (const auto& v : g.vertices) r.observed[v.type]++;
  return r;
}

// ---------------------------------------------------------------------------
// Subgraphs and checks

SuperspecialGraph subgraph(const SuperspecialGraph& g, VertexKind which) {
  SuperspecialGraph s;
  s.p = g.p;
  s.seed = g.seed;
  s.stats = g.stats;
  std::vector<int> remap(g.vertices.size(), -1);
  for (const auto& v : g.vertices) {
    if (v.kind != which) continue;
    remap[v.id] = static_cast<int>(s.vertices.size());
    VertexRecord w = v;
    w.id = remap[v.id];
    s.vertices.push_back(std::move(w));
  }
  for (const auto& e : g.edges) {
    if (remap[e.src] < 0 || remap[e.dst] < 0) continue;
    EdgeRecord f = e;
    f.src = remap[e.src];
    f.dst = remap[e.dst];
    s.edges.push_back(std::move(f));
  }
  return s;
}

std::vector<std::pair<int, int>> ratio_principle_violations(const SuperspecialGraph& g) {
  std::map<std::pair<int, int>, long> w;
  for (const auto& e : g.edges) w[{e.src, e.dst}] += e.weight;
  std::vector<std::pair<int, int>> bad;
  for (const auto& [uv, wf] : w) {
    const auto [u, v] = uv;
    auto it = w.find({v, u});
    const long wr = it == w.end() ? 0 : it->second;
    if (static_cast<long>(g.vertices[u].ra_order) * wr != static_cast<long>(g.vertices[v].ra_order) * wf)
      bad.emplace_back(u, v);
  }
  return bad;
}

long dual_round_trip_failures(const SuperspecialGraph& g, long* checked) {
  long fails = 0, n = 0;
  for (const auto& v : g.vertices) {
    for (const auto& st : expand_surface(v.model)) {
      ++n;
      if (apply_dual(st).key != v.key) ++fails;
    }
  }
  if (checked) *checked = n;
  return fails;
}

DualTransportReport dual_transport_check(const SuperspecialGraph& g) {
  DualTransportReport rep;
  const auto table = g.kernel_edge_table();
  for (const auto& e : g.edges) {
    ++rep.checked;
    const IsogenyStep& h = e.dual_hint;
    const VertexRecord& v = g.vertices[e.dst];
    int kernel = -1;
    if (!h.codomain.product) {
      const auto m = moebius_matches(h.codomain.curve.roots, v.model.curve.roots);
      if (m.empty()) {
        rep.failures.push_back("no Moebius match onto vertex " + std::to_string(v.id));
        continue;
      }
      Pairing img{};
      for (int t = 0; t < 3; ++t) img[t] = {m[0].perm[h.dual_pairing[t][0]], m[0].perm[h.dual_pairing[t][1]]};
      kernel = pairing_index(img);
    } else {
      const bool straight = h.codomain.e1.j() == v.model.e1.j() && h.codomain.e2.j() == v.model.e2.j();
      const EllipticModel& t1 = straight ? v.model.e1 : v.model.e2;
      const EllipticModel& t2 = straight ? v.model.e2 : v.model.e1;
      const auto ma = affine_matches(h.codomain.e1, t1), mb = affine_matches(h.codomain.e2, t2);
      if (ma.empty() || mb.empty()) {
        rep.failures.push_back("no affine match onto vertex " + std::to_string(v.id));
        continue;
      }
      ProductKernel k = act(h.dual_product, ma[0], mb[0]);
      if (!straight) {
        // Kernel on (t1, t2) = (v.e2, v.e1); swap coordinates.
        k = k.gluing ? ProductKernel{true, 0, 0, inverse(k.pi)} : ProductKernel{false, k.j, k.i, {0, 1, 2}};
      }
      kernel = product_kernel_index(k);
    }
    const int back = table[v.id][kernel];
    if (back < 0 || g.edges[back].dst != e.src) {
      rep.failures.push_back("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                             ": transported dual kernel does not return");
      continue;
    }
    const long lhs = static_cast<long>(g.vertices[e.src].ra_order) * g.edges[back].weight;
    const long rhs = static_cast<long>(v.ra_order) * e.weight;
    if (lhs != rhs)
      rep.failures.push_back("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + ": ratio " +
                             std::to_string(lhs) + " != " + std::to_string(rhs));
  }
  return rep;
}

int product_edge_classes(const SuperspecialGraph& g, int v) {
  int n = 0;
  for (const auto& e : g.edges)
    if (e.src == v && g.vertices[e.dst].kind == VertexKind::Product) ++n;
  return n;
}

std::vector<int> reroute_path(const SuperspecialGraph& g, const std::vector<int>& path) {
  if (path.size() != 3 || g.vertices[path[1]].kind != VertexKind::Product) return path;
  if (g.vertices[path[0]].kind != VertexKind::Jacobian)
    throw PreconditionError("rerouted path must start at a Jacobian");
  const int n = static_cast<int>(g.vertices.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);
  std::vector<int> prev(n, -2), dist(n, -1);
  std::deque<int> q{path[0]};
  dist[path[0]] = 0;
  prev[path[0]] = -1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    if (u == path[2] && dist[u] > 0) break;
    if (dist[u] >= 4) continue;
    if (u != path[0] && g.vertices[u].kind != VertexKind::Jacobian) continue;
    for (int w : adj[u]) {
      if (dist[w] >= 0 && !(w == path[2] && w == path[0])) continue;
      dist[w] = dist[u] + 1;
      prev[w] = u;
      q.push_back(w);
    }
  }
  if (dist[path[2]] <= 0 && path[2] != path[0])
    throw InvariantError("no Jacobian-interior reroute of length <= 4");
  if (path[2] == path[0] && prev[path[0]] == -1) {
    // closed path: search for a Jacobian-interior cycle through path[0]
    for (int w : adj[path[0]])
      if (w == path[0]) return {path[0], path[0]};
    throw InvariantError("closed path reroute not supported");
  }
  std::vector<int> out;
  for (int v = path[2]; v != -1; v = prev[v]) out.push_back(v);
  std::reverse(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Exports

namespace {

nlohmann::json encode(const Gf& x) { return x.encode(); }

nlohmann::json model_json(const VertexRecord& v) {
  nlohmann::json m;
  if (v.kind == VertexKind::Product) {
    m["j"] = {v.key.vals[0].c0, v.key.vals[0].c1, v.key.vals[1].c0, v.key.vals[1].c1};
    for (const auto* e : {&v.model.e1, &v.model.e2}) {
      nlohmann::json roots = nlohmann::json::array();
      for (const auto& r : e->roots) roots.push_back(encode(r));
      m["roots"].push_back(roots);
    }
    m["field_degree"] = v.model.e1.field->degree();
  } else {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& c : v.model.curve.f.coeffs()) f.push_back(encode(c));
    m["f"] = f;
    m["field_degree"] = v.model.curve.field->degree();
  }
  return m;
}

}  // namespace

std::string to_json(const SuperspecialGraph& g) {
  nlohmann::json j;
  j["p"] = g.p;
  j["seed"] = g.seed;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : g.vertices) {
    j["vertices"].push_back({{"id", v.id},
                             {"kind", kind_name(v.kind)},
                             {"type", ra_name(v.type)},
                             {"ra_order", v.ra_order},
                             {"key", v.key.encode()},
                             {"model", model_json(v)}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"weight", e.weight}});
  return j.dump(1);
}

std::string to_dot(const SuperspecialGraph& g) {
  std::ostringstream os;
  os << "digraph G" << g.p << " {\n";
  for (const auto& v : g.vertices)
    os << "  v" << v.id << " [label=\"" << v.id << ": " << ra_name(v.type) << " (" << v.ra_order << ")\""
       << (v.kind == VertexKind::Product ? ", shape=box" : "") << "];\n";
  for (const auto& e : g.edges) os << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_csv(const SuperspecialGraph& g) {
  std::ostringstream os;
  os << "src,dst,weight,src_type,dst_type\n";
  for (const auto& e : g.edges)
    os << e.src << "," << e.dst << "," << e.weight << "," << ra_name(g.vertices[e.src].type) << ","
       << ra_name(g.vertices[e.dst].type) << "\n";
  return os.str();
}

}  // namespace ssg
