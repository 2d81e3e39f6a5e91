#pragma once

// Random walks on weighted digraphs: transition matrix, exact stationary
// distributions, linear imbalance, eigenvalues, diameters and mixing bounds.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssg/digraph.hpp"

namespace ssg {

using Rational = boost::multiprecision::cpp_rational;

/// Column-stochastic M[v,u] = w_uv / deg u, stored sparsely by column.
struct TransitionMatrix {
  /// Original vertex ids, in row/column order.
  std::vector<int> vertices;
  /// Vertices dropped because their out-degree vanished (subgraphs only).
  std::vector<int> excluded;
  std::vector<int> degree;
  std::vector<int> ra_order;
  /// cols[u] = (v, total weight u -> v), sorted by v.
  std::vector<std::vector<std::pair<int, long>>> cols;

  int size() const { return static_cast<int>(vertices.size()); }
  Rational entry(int v, int u) const;
  std::vector<Rational> apply(const std::vector<Rational>& x) const;
  std::vector<double> apply(const std::vector<double>& x) const;
  bool columns_stochastic() const;
  /// Dense copy of M in double precision, row-major.
  std::vector<double> dense() const;
};

TransitionMatrix transition_matrix(const WeightedDigraph& g);

/// Block of the walk on g indexed by keep: degrees stay those of g, so columns
/// may sum to less than one. Its spectrum times deg is the spectrum of the
/// induced subgraph's weighted adjacency matrix.
TransitionMatrix restricted_transition_matrix(const WeightedDigraph& g, const std::vector<int>& keep);

struct StationaryDistribution {
  std::vector<Rational> exact;
  std::vector<double> values;
};

/// phi(u) proportional to deg(u) / #RA(u).
StationaryDistribution stationary_closed_form(const TransitionMatrix& m);
bool is_stationary(const TransitionMatrix& m, const std::vector<Rational>& phi);
/// phi(u) M[v,u] = phi(v) M[u,v] for all u, v.
bool detailed_balance(const TransitionMatrix& m, const std::vector<Rational>& phi);

struct LinearImbalanceSpec {
  std::vector<Rational> degree;
  /// ratio[i][j] = m_ij, with w(e) = m_ij w(dual e) for e from class i to class j;
  /// empty when no edge joins the classes.
  std::vector<std::vector<std::optional<Rational>>> ratio;
};

struct LinearImbalanceResult {
  bool composable = false;
  std::vector<Rational> alpha;  // alpha[0] = 1
  std::string diagnostic;
};

/// Solves (m_ji/d_j) alpha_j = alpha_i/d_i along a spanning tree of the class
/// graph, then checks the remaining equations.
LinearImbalanceResult linear_imbalance_solve(const LinearImbalanceSpec& spec);

/// Reads degrees and ratios off a graph for a given vertex partition. Throws
/// InvariantError if a class is not degree-regular or a ratio is not constant.
LinearImbalanceSpec imbalance_spec(const WeightedDigraph& g, const std::vector<int>& cls, int classes);

struct SpectralReport {
  /// Perron eigenvalue: 1 for a stochastic matrix, smaller for a restricted block.
  double lambda1 = 1;
  double lambda2 = 0, lambda_min = 0, lambda_star = 0;
  /// scale * lambda_star
  double scaled = 0;
  double scale = 15;
  std::string method;
  double residual = 0;
  bool converged = false;
};

/// Symmetric eigenvalues by cyclic Jacobi; a is row-major n x n and is destroyed.
/// If vecs is non-null it receives eigenvectors as columns. Returns the final
/// off-diagonal Frobenius norm.
double jacobi_eigenvalues(std::vector<double>& a, int n, std::vector<double>& eig, std::vector<double>* vecs = nullptr);

/// S = Phi^{-1/2} M Phi^{1/2}, row-major; symmetric because M is column-stochastic
/// and reversible.
std::vector<double> symmetrized(const TransitionMatrix& m, const StationaryDistribution& phi);

struct SpectralOptions {
  int dense_threshold = 2000;
  double scale = 15;
};

/// Requires a connected, aperiodic graph. lambda_star is the largest modulus over
/// the spectrum with the Perron eigenvalue removed.
SpectralReport lambda_star(const TransitionMatrix& m, const StationaryDistribution& phi, SpectralOptions opt = {});
/// Lanczos with full reorthogonalization; for a stochastic matrix the Perron
/// vector sqrt(phi) is deflated.
SpectralReport lambda_star_lanczos(const TransitionMatrix& m, const StationaryDistribution& phi, double scale = 15);

/// Directed BFS diameter; nullopt if some vertex cannot reach another.
std::optional<int> diameter(const WeightedDigraph& g);
bool strongly_connected(const WeightedDigraph& g);
/// gcd of all closed walk lengths; 1 means aperiodic. Requires strong connectivity.
int period(const WeightedDigraph& g);

/// lambda_star^n sqrt((deg v / deg u)(#RA(u) / #RA(v))), indices into m.
double mixing_bound(const TransitionMatrix& m, double lambda_star, int u, int v, int n);

}  // namespace ssg
