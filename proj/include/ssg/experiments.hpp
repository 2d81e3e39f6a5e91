#pragma once

// Per-prime experiment drivers shared by the command-line tool and the
// acceptance run: spectral table rows, the invariant suite and summaries.

#include <optional>
#include <string>
#include <vector>

#include "ssg/graph.hpp"
#include "ssg/spectra.hpp"

namespace ssg {

struct SpectraRow {
  u32 p = 0;
  int vertices = 0;
  std::optional<int> d_full, d_jacobian, d_product;
  /// Full graph, then the Jacobian and product blocks of its walk.
  SpectralReport full, jacobian, product;
};

SpectraRow spectra_row(const SuperspecialGraph& g, SpectralOptions opt = {});
std::string spectra_csv_header();
std::string spectra_csv_line(const SpectraRow& r);

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

/// Out-weights, ratio principle, census, stationarity, detailed balance,
/// Richelot identities, dual round trips, classifier agreement, subgraph
/// connectivity and aperiodicity, diameter inequalities. extended adds the
/// per-edge dual transport check.
std::vector<Check> verify_graph(const SuperspecialGraph& g, bool extended);

/// Vertex and edge counts and the census table.
std::string summary(const SuperspecialGraph& g);

}  // namespace ssg
