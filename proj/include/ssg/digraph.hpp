#pragma once

// Minimal weighted digraph shared by the elliptic graph, the superspecial
// graph and the spectral routines.

#include <vector>

namespace ssg {

struct Arc {
  int src = 0;
  int dst = 0;
  int weight = 0;
};

struct WeightedDigraph {
  /// Order of the reduced automorphism group of each vertex.
  std::vector<int> ra_order;
  std::vector<Arc> arcs;

  int size() const { return static_cast<int>(ra_order.size()); }
  /// Sum of out-weights per vertex.
  std::vector<int> out_degree() const {
    std::vector<int> d(ra_order.size(), 0);
    for (const auto& a : arcs) d[a.src] += a.weight;
    return d;
  }
};

}  // namespace ssg
