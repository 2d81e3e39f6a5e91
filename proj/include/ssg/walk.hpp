#pragma once

// Seeded random walks on the superspecial graph or one of its subgraphs.

#include <optional>
#include <string>
#include <vector>

#include "ssg/graph.hpp"
#include "ssg/spectra.hpp"

namespace ssg {

enum class Selection { Full, Jacobian, Product };

std::string selection_name(Selection s);
/// Throws PreconditionError on an unknown name.
Selection parse_selection(const std::string& s);

/// Vertices of the selected (renormalized) walk, with the graph it runs on.
SuperspecialGraph select(const SuperspecialGraph& g, Selection s);

struct WalkConfig {
  long steps = 10000;
  u64 seed = 0;
  /// Vertex id in g; defaults to the seed vertex, or the first vertex of the subgraph.
  std::optional<int> start;
  Selection selection = Selection::Full;
  /// Keep the visited vertex of every step.
  bool record = false;
  /// Walks sharing a seed get independent streams by index.
  u64 walk_index = 0;
};

struct WalkStats {
  u32 p = 0;
  long steps = 0;
  u64 seed = 0;
  Selection selection = Selection::Full;
  int start = 0;
  /// visits[v] for vertex id v of g (zero outside the selection).
  std::vector<long> visits;
  long product_hits = 0;
  double product_ratio = 0;
  /// product_ratio * p
  double scaled_ratio = 0;
  Rational expected_product_mass = 0;
  /// One sigma for product_ratio: binomial, widened by (1 + l2) / (1 - l2) for
  /// the correlation between steps of a reversible chain.
  double product_sigma = 0;
  /// Total variation between visit frequencies and phi.
  double total_variation = 0;
  std::vector<int> trajectory;
};

WalkStats random_walk(const SuperspecialGraph& g, const WalkConfig& cfg);

std::string walk_json(const SuperspecialGraph& g, const WalkStats& s);
/// step, vertex, kind; needs a recorded trajectory.
std::string walk_csv(const SuperspecialGraph& g, const WalkStats& s);

struct DistributionCheck {
  int start = 0;
  double lambda_star = 0;
  /// Per step k = 0..n: max_v |M^k e_start (v) - phi(v)| and the matching bound.
  std::vector<double> max_deviation;
  /// Per step: max over v of deviation / bound (<= 1 when the bound holds).
  std::vector<double> worst_ratio;
  long violations = 0;
  bool ok() const { return violations == 0; }
};

/// Exact n-step distributions from a point mass, compared with the mixing bound.
DistributionCheck empirical_distribution_check(const SuperspecialGraph& g, Selection s, int start, int n);

}  // namespace ssg
