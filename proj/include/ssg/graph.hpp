#pragma once

// The superspecial (2,2)-isogeny graph Gamma_2(2;p): breadth-first
// construction from an elliptic square, orbit weights, census, subgraphs,
// path rerouting and exports.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssg/digraph.hpp"
#include "ssg/richelot.hpp"

namespace ssg {

using Rational = boost::multiprecision::cpp_rational;

enum class VertexKind { Jacobian, Product };

struct VertexRecord {
  int id = 0;
  VertexKey key;
  VertexKind kind = VertexKind::Jacobian;
  RAType type = RAType::A;
  int ra_order = 1;
  /// Size of the Moebius stabilizer (Jacobians) or of the affine action (products);
  /// an independent count of #RA.
  int action_order = 1;
  SurfaceModel model;
};

struct EdgeRecord {
  int src = 0, dst = 0, weight = 0;
  /// Kernel indices (into the 15 of the source) forming this RA-orbit.
  std::vector<int> kernels;
  /// Step for kernels.front(), carrying the dual kernel on its codomain.
  IsogenyStep dual_hint;
};

struct BuildStats {
  /// Number of vertex models by field degree over F_{p^2}.
  std::map<int, int> ext_degree_histogram;
  long identity_checks = 0;
  long identity_failures = 0;
  long split_steps = 0;
  long isomorphism_loops = 0;
  long model_fallbacks = 0;
  double seconds = 0;
};

struct SuperspecialGraph {
  u32 p = 0;
  std::string seed;
  std::vector<VertexRecord> vertices;
  std::vector<EdgeRecord> edges;
  BuildStats stats;

  WeightedDigraph digraph() const;
  std::vector<int> out_degree() const { return digraph().out_degree(); }
  /// Edge index per (vertex, kernel index), for full graphs.
  std::vector<std::array<int, 15>> kernel_edge_table() const;
  std::optional<int> find(const VertexKey& k) const;
};

/// Generators of the reduced automorphism action on the 15 kernels, as
/// permutations of kernel indices. The second value is #RA.
std::pair<std::vector<std::array<int, 15>>, int> kernel_action(const SurfaceModel& m);

/// Groups the 15 steps of a vertex into RA-orbits (one edge per orbit, dst unset).
std::vector<EdgeRecord> compute_weights(const SurfaceModel& m, const std::vector<IsogenyStep>& steps);

/// Default seed: E x E for the first enumerated supersingular j.
SuperspecialGraph build_graph(u32 p, std::optional<std::pair<JInvariant, JInvariant>> seed = std::nullopt);

struct CensusReport {
  u32 p = 0;
  int eps1 = 0, eps2 = 0, eps3 = 0, eps5 = 0;
  int n_p = 0;
  std::map<RAType, int> observed;
  std::map<RAType, Rational> expected;
  bool integral = true;
  bool matches() const;
};

CensusReport expected_census(u32 p);
CensusReport census(const SuperspecialGraph& g);

/// Induced subgraph on one kind of vertex, renumbered; dual hints are kept.
SuperspecialGraph subgraph(const SuperspecialGraph& g, VertexKind which);

/// Pairs (u, v) violating #RA(u) w(v->u) = #RA(v) w(u->v).
std::vector<std::pair<int, int>> ratio_principle_violations(const SuperspecialGraph& g);

struct DualTransportReport {
  long checked = 0;
  std::vector<std::string> failures;
};

/// Per-edge check: transports each dual hint onto the codomain's stored model
/// and confirms a reverse edge satisfying the ratio principle.
DualTransportReport dual_transport_check(const SuperspecialGraph& g);

/// Dual round trip for every edge representative: the stored dual kernel at the
/// codomain returns the source key. Returns the number of failures.
long dual_round_trip_failures(const SuperspecialGraph& g, long* checked = nullptr);

/// Number of product-bound edges leaving a Jacobian vertex.
int product_edge_classes(const SuperspecialGraph& g, int v);

/// Replaces a path [J0, product, A] by one of length <= 4 whose interior
/// vertices are all Jacobians; Jacobian-interior paths are returned as is.
std::vector<int> reroute_path(const SuperspecialGraph& g, const std::vector<int>& path);

std::string to_json(const SuperspecialGraph& g);
std::string to_dot(const SuperspecialGraph& g);
std::string to_csv(const SuperspecialGraph& g);

std::string kind_name(VertexKind k);

}  // namespace ssg
