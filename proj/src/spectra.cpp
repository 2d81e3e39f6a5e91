#include "ssg/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <random>

#include "ssg/errors.hpp"
#include "ssg/field.hpp"

namespace ssg {

// ---------------------------------------------------------------------------
// Transition matrix

Rational TransitionMatrix::entry(int v, int u) const {
  for (const auto& [row, w] : cols[u])
    if (row == v) return Rational(w, degree[u]);
  return 0;
}

std::vector<Rational> TransitionMatrix::apply(const std::vector<Rational>& x) const {
  std::vector<Rational> y(size());
  for (int u = 0; u < size(); ++u) {
    if (x[u] == 0) continue;
    const Rational xu = x[u] / degree[u];
    for (const auto& [v, w] : cols[u]) y[v] += xu * w;
  }
  return y;
}

std::vector<double> TransitionMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(size(), 0.0);
  for (int u = 0; u < size(); ++u) {
    const double xu = x[u] / degree[u];
    for (const auto& [v, w] : cols[u]) y[v] += xu * static_cast<double>(w);
  }
  return y;
}

bool TransitionMatrix::columns_stochastic() const {
  for (int u = 0; u < size(); ++u) {
    long s = 0;
    for (const auto& [v, w] : cols[u]) {
      if (w <= 0) return false;
      s += w;
    }
    if (s != degree[u]) return false;
  }
  return true;
}

std::vector<double> TransitionMatrix::dense() const {
  const int n = size();
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u)
    for (const auto& [v, w] : cols[u]) a[static_cast<std::size_t>(v) * n + u] = static_cast<double>(w) / degree[u];
  return a;
}

TransitionMatrix transition_matrix(const WeightedDigraph& g) {
  const int n = g.size();
  std::vector<bool> alive(n, true);
  std::vector<long> deg;
  for (bool changed = true; changed;) {
    changed = false;
    deg.assign(n, 0);
    for (const auto& a : g.arcs)
      if (alive[a.src] && alive[a.dst]) deg[a.src] += a.weight;
    for (int v = 0; v < n; ++v)
      if (alive[v] && deg[v] == 0) {
        alive[v] = false;
        changed = true;
      }
  }
  TransitionMatrix m;
  std::vector<int> index(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!alive[v]) {
      m.excluded.push_back(v);
      continue;
    }
    index[v] = static_cast<int>(m.vertices.size());
    m.vertices.push_back(v);
    m.degree.push_back(static_cast<int>(deg[v]));
    m.ra_order.push_back(g.ra_order[v]);
  }
  std::vector<std::map<int, long>> cols(m.vertices.size());
  for (const auto& a : g.arcs)
    if (alive[a.src] && alive[a.dst]) cols[index[a.src]][index[a.dst]] += a.weight;
  for (const auto& c : cols) m.cols.emplace_back(c.begin(), c.end());
  SSG_CHECK(m.columns_stochastic(), "transition matrix columns do not sum to one");
  return m;
}

TransitionMatrix restricted_transition_matrix(const WeightedDigraph& g, const std::vector<int>& keep) {
  const auto deg = g.out_degree();
  std::vector<int> index(g.size(), -1);
  TransitionMatrix m;
  for (int v : keep) {
    SSG_CHECK(index[v] < 0, "repeated vertex in restriction");
    index[v] = static_cast<int>(m.vertices.size());
    m.vertices.push_back(v);
    m.degree.push_back(deg[v]);
    m.ra_order.push_back(g.ra_order[v]);
  }
  std::vector<std::map<int, long>> cols(m.vertices.size());
  for (const auto& a : g.arcs)
    if (index[a.src] >= 0 && index[a.dst] >= 0) cols[index[a.src]][index[a.dst]] += a.weight;
  for (const auto& c : cols) m.cols.emplace_back(c.begin(), c.end());
  return m;
}

// ---------------------------------------------------------------------------
// Stationary distribution

StationaryDistribution stationary_closed_form(const TransitionMatrix& m) {
  StationaryDistribution s;
  Rational total = 0;
  for (int u = 0; u < m.size(); ++u) {
    s.exact.emplace_back(m.degree[u], m.ra_order[u]);
    total += s.exact.back();
  }
  for (auto& x : s.exact) {
    x /= total;
    s.values.push_back(static_cast<double>(x));
  }
  return s;
}

bool is_stationary(const TransitionMatrix& m, const std::vector<Rational>& phi) { return m.apply(phi) == phi; }

bool detailed_balance(const TransitionMatrix& m, const std::vector<Rational>& phi) {
  for (int u = 0; u < m.size(); ++u)
    for (const auto& [v, w] : m.cols[u])
      if (phi[u] * Rational(w, m.degree[u]) != phi[v] * m.entry(u, v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Linear imbalance

LinearImbalanceResult linear_imbalance_solve(const LinearImbalanceSpec& spec) {
  const int n = static_cast<int>(spec.degree.size());
  LinearImbalanceResult r;
  if (n == 0) {
    r.diagnostic = "no classes";
    return r;
  }
  for (int i = 0; i < n; ++i) {
    if (spec.degree[i] <= 0) {
      r.diagnostic = "class " + std::to_string(i) + " has non-positive degree";
      return r;
    }
    for (int j = 0; j < n; ++j) {
      const auto& a = spec.ratio[i][j];
      const auto& b = spec.ratio[j][i];
      if (a.has_value() != b.has_value() || (a && *a * *b != 1)) {
        r.diagnostic = "m_ij m_ji != 1 for classes " + std::to_string(i) + ", " + std::to_string(j);
        return r;
      }
    }
  }
  std::vector<std::optional<Rational>> alpha(n);
  alpha[0] = Rational(1);
  std::deque<int> q{0};
  while (!q.empty()) {
    const int i = q.front();
    q.pop_front();
    for (int j = 0; j < n; ++j) {
      if (j == i || alpha[j] || !spec.ratio[j][i]) continue;
      alpha[j] = *alpha[i] * spec.degree[j] / (spec.degree[i] * *spec.ratio[j][i]);
      q.push_back(j);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!alpha[i]) {
      r.diagnostic = "class graph is disconnected";
      return r;
    }
    r.alpha.push_back(*alpha[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !spec.ratio[j][i]) continue;
      if (*spec.ratio[j][i] / spec.degree[j] * r.alpha[j] != r.alpha[i] / spec.degree[i]) {
        r.diagnostic = "not composable: equation for classes " + std::to_string(i) + ", " + std::to_string(j) + " fails";
        return r;
      }
    }
  r.composable = true;
  return r;
}

LinearImbalanceSpec imbalance_spec(const WeightedDigraph& g, const std::vector<int>& cls, int classes) {
  SSG_CHECK(static_cast<int>(cls.size()) == g.size(), "partition size mismatch");
  LinearImbalanceSpec s;
  s.degree.assign(classes, 0);
  s.ratio.assign(classes, std::vector<std::optional<Rational>>(classes));
  const auto deg = g.out_degree();
  std::vector<bool> seen(classes, false);
  for (int v = 0; v < g.size(); ++v) {
    const int c = cls[v];
    if (seen[c] && s.degree[c] != deg[v])
      throw InvariantError("class " + std::to_string(c) + " is not degree-regular");
    seen[c] = true;
    s.degree[c] = deg[v];
  }
  std::map<std::pair<int, int>, long> w;
  for (const auto& a : g.arcs) w[{a.src, a.dst}] += a.weight;
  for (const auto& [uv, fwd] : w) {
    const auto [u, v] = uv;
    const auto it = w.find({v, u});
    if (it == w.end()) throw InvariantError("edge without a reverse edge");
    const Rational m(fwd, it->second);
    auto& slot = s.ratio[cls[u]][cls[v]];
    if (cls[u] == cls[v] && m != 1) throw InvariantError("unequal weights inside a class");
    if (slot && *slot != m) throw InvariantError("imbalance ratio is not constant between classes");
    slot = m;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Eigenvalues

double jacobi_eigenvalues(std::vector<double>& a, int n, std::vector<double>& eig, std::vector<double>* vecs) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  if (vecs) {
    vecs->assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) (*vecs)[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  auto off_norm = [&] {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
  };
  double total = 0;
  for (double x : a) total += x * x;
  const double tol = 1e-14 * std::max(1.0, std::sqrt(total));
  double off = off_norm();
  for (int sweep = 0; sweep < 100 && off > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double tau = (at(q, q) - at(p, p)) / (2 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const double c = 1 / std::sqrt(1 + t * t), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double kp = at(k, p), kq = at(k, q);
          at(k, p) = c * kp - s * kq;
          at(k, q) = s * kp + c * kq;
        }
        for (int k = 0; k < n; ++k) {
          const double pk = at(p, k), qk = at(q, k);
          at(p, k) = c * pk - s * qk;
          at(q, k) = s * pk + c * qk;
        }
        if (vecs) {
          auto& V = *vecs;
          for (int k = 0; k < n; ++k) {
            const double kp = V[static_cast<std::size_t>(k) * n + p], kq = V[static_cast<std::size_t>(k) * n + q];
            V[static_cast<std::size_t>(k) * n + p] = c * kp - s * kq;
            V[static_cast<std::size_t>(k) * n + q] = s * kp + c * kq;
          }
        }
      }
    off = off_norm();
  }
  eig.resize(n);
  for (int i = 0; i < n; ++i) eig[i] = at(i, i);
  return off;
}

std::vector<double> symmetrized(const TransitionMatrix& m, const StationaryDistribution& phi) {
  const int n = m.size();
  std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0), root(n);
  for (int i = 0; i < n; ++i) root[i] = std::sqrt(phi.values[i]);
  for (int u = 0; u < n; ++u)
    for (const auto& [v, w] : m.cols[u])
      s[static_cast<std::size_t>(v) * n + u] = root[u] * (static_cast<double>(w) / m.degree[u]) / root[v];
  // Symmetric up to rounding by detailed balance; average the two triangles.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double& a = s[static_cast<std::size_t>(i) * n + j];
      double& b = s[static_cast<std::size_t>(j) * n + i];
      SSG_CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)), "walk is not reversible for this phi");
      a = b = 0.5 * (a + b);
    }
  return s;
}

namespace {

void finish(SpectralReport& r, double scale) {
  r.lambda_star = std::max(std::abs(r.lambda2), std::abs(r.lambda_min));
  r.scale = scale;
  r.scaled = scale * r.lambda_star;
}

}  // namespace

SpectralReport lambda_star(const TransitionMatrix& m, const StationaryDistribution& phi, SpectralOptions opt) {
  const int n = m.size();
  if (n > opt.dense_threshold) return lambda_star_lanczos(m, phi, opt.scale);
  SpectralReport r;
  r.method = "jacobi";
  if (n <= 1) {
    r.converged = true;
    if (n == 1) r.lambda1 = static_cast<double>(m.cols[0].empty() ? 0 : m.cols[0][0].second) / m.degree[0];
    finish(r, opt.scale);
    return r;
  }
  auto s = symmetrized(m, phi);
  std::vector<double> eig;
  r.residual = jacobi_eigenvalues(s, n, eig);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  if (m.columns_stochastic())
    SSG_CHECK(std::abs(eig[0] - 1) < 1e-8, "leading eigenvalue of a stochastic matrix is not 1");
  r.lambda1 = eig[0];
  r.lambda2 = eig[1];
  r.lambda_min = eig[n - 1];
  r.converged = r.residual <= 1e-9;
  finish(r, opt.scale);
  return r;
}

SpectralReport lambda_star_lanczos(const TransitionMatrix& m, const StationaryDistribution& phi, double scale) {
  const int n = m.size();
  SpectralReport r;
  r.method = "lanczos";
  if (n <= 2) {
    SpectralOptions opt;
    opt.scale = scale;
    opt.dense_threshold = n;
    r = lambda_star(m, phi, opt);
    r.method = "lanczos";
    return r;
  }
  std::vector<double> root(n);
  for (int i = 0; i < n; ++i) root[i] = std::sqrt(phi.values[i]);
  auto matvec = [&](const std::vector<double>& x) {
    std::vector<double> y(n, 0.0);
    for (int u = 0; u < n; ++u) {
      const double xu = x[u] * root[u] / m.degree[u];
      for (const auto& [v, w] : m.cols[u]) y[v] += xu * static_cast<double>(w) / root[v];
    }
    return y;
  };
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  auto axpy = [&](double c, const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < n; ++i) y[i] += c * x[i];
  };
  const bool deflate = m.columns_stochastic();
  // Once the Krylov space fills the (deflated) space the Ritz values are exact.
  const int krylov_dim = deflate ? n - 1 : n;
  const int max_steps = std::min(krylov_dim, 1500);
  std::vector<double> q0 = root;
  {
    const double nq = std::sqrt(dot(q0, q0));
    for (double& x : q0) x /= nq;
  }
  std::mt19937_64 rng(global_seed());
  std::uniform_real_distribution<double> unif(-1, 1);
  std::vector<double> v(n);
  for (double& x : v) x = unif(rng);
  if (deflate) axpy(-dot(q0, v), q0, v);
  {
    const double nv = std::sqrt(dot(v, v));
    for (double& x : v) x /= nv;
  }
  std::vector<std::vector<double>> Q{v};
  std::vector<double> alpha, beta;

  for (int k = 0; k < max_steps; ++k) {
    std::vector<double> w = matvec(Q[k]);
    alpha.push_back(dot(Q[k], w));
    for (int pass = 0; pass < 2; ++pass) {
      if (deflate) axpy(-dot(q0, w), q0, w);
      for (const auto& q : Q) axpy(-dot(q, w), q, w);
    }
    const double b = std::sqrt(dot(w, w));
    beta.push_back(b);
    const int size = k + 1;
    const bool exhausted = b < 1e-12 || size == max_steps;
    if (size % 10 == 0 || exhausted) {
      std::vector<double> T(static_cast<std::size_t>(size) * size, 0.0), eig, vecs;
      for (int i = 0; i < size; ++i) {
        T[static_cast<std::size_t>(i) * size + i] = alpha[i];
        if (i + 1 < size) T[static_cast<std::size_t>(i) * size + i + 1] = T[static_cast<std::size_t>(i + 1) * size + i] = beta[i];
      }
      jacobi_eigenvalues(T, size, eig, &vecs);
      std::vector<int> order(size);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int c) { return eig[a] > eig[c]; });
      auto res = [&](int i) { return std::abs(b * vecs[static_cast<std::size_t>(size - 1) * size + i]); };
      // Without deflation the top Ritz value approximates the Perron eigenvalue.
      const int top = order[0], hi = deflate ? order[0] : order[std::min(1, size - 1)], lo = order[size - 1];
      r.lambda1 = deflate ? 1.0 : eig[top];
      r.lambda2 = eig[hi];
      r.lambda_min = eig[lo];
      r.residual = std::max({res(top), res(hi), res(lo)});
      r.converged = r.residual <= 1e-6 || b < 1e-12 || size == krylov_dim;
      if (r.converged || exhausted) break;
    }
    for (double& x : w) x /= b;
    Q.push_back(std::move(w));
  }
  finish(r, scale);
  return r;
}

// ---------------------------------------------------------------------------
// Structure

namespace {

std::vector<std::vector<int>> adjacency(const WeightedDigraph& g, bool reverse) {
  std::vector<std::vector<int>> adj(g.size());
  for (const auto& a : g.arcs) {
    if (reverse)
      adj[a.dst].push_back(a.src);
    else
      adj[a.src].push_back(a.dst);
  }
  return adj;
}

std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int s) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int w : adj[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

}  // namespace

std::optional<int> diameter(const WeightedDigraph& g) {
  const auto adj = adjacency(g, false);
  int d = 0;
  for (int s = 0; s < g.size(); ++s) {
    for (int x : bfs(adj, s)) {
      if (x < 0) return std::nullopt;
      d = std::max(d, x);
    }
  }
  return d;
}

bool strongly_connected(const WeightedDigraph& g) {
  if (g.size() == 0) return true;
  for (bool rev : {false, true}) {
    const auto dist = bfs(adjacency(g, rev), 0);
    if (std::any_of(dist.begin(), dist.end(), [](int x) { return x < 0; })) return false;
  }
  return true;
}

int period(const WeightedDigraph& g) {
  SSG_CHECK(strongly_connected(g), "period needs a strongly connected graph");
  if (g.size() == 0) return 0;
  const auto level = bfs(adjacency(g, false), 0);
  int d = 0;
  for (const auto& a : g.arcs) d = std::gcd(d, std::abs(level[a.src] + 1 - level[a.dst]));
  return d;
}

double mixing_bound(const TransitionMatrix& m, double lambda_star, int u, int v, int n) {
  const double ratio = (static_cast<double>(m.degree[v]) / m.degree[u]) *
                       (static_cast<double>(m.ra_order[u]) / m.ra_order[v]);
  return std::pow(lambda_star, n) * std::sqrt(ratio);
}

}  // namespace ssg
