#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "manikde/kernel.hpp"
#include "manikde/numeric.hpp"
#include "manikde/point_cloud.hpp"

namespace manikde {

// epsilon-neighborhood graph over {x, X_1..X_n}. Vertex 0 is the query
// point; vertex i >= 1 is sample i-1. Edges join every pair at Euclidean
// distance <= epsilon, weighted by that distance.
struct EpsGraph {
  double epsilon = 0.0;
  std::size_t n_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j
  std::vector<double> weights;                             // aligned with edges
  std::vector<double> dist_from_x;  // shortest-path length, inf if unreachable

  static constexpr double inf = std::numeric_limits<double>::infinity();
};

namespace detail {

// Exact threshold edge enumeration. Pairs are pruned by a sort on the
// first coordinate (|x1 - y1| > eps implies |x - y| > eps), which changes
// nothing about the resulting edge set versus the naive double loop.
inline void build_edges(const std::vector<double>& flat, std::size_t nv, int dim,
                        double eps, EpsGraph& graph) {
  std::vector<std::size_t> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return flat[a * dim] < flat[b * dim];
  });
  const double eps2 = eps * eps;
  for (std::size_t oi = 0; oi < nv; ++oi) {
    const std::size_t i = order[oi];
    const double* pi = flat.data() + i * dim;
    for (std::size_t oj = oi + 1; oj < nv; ++oj) {
      const std::size_t j = order[oj];
      const double* pj = flat.data() + j * dim;
      if (pj[0] - pi[0] > eps) break;
      const double d2 = squared_distance(pi, pj, dim);
      if (d2 <= eps2) {
        graph.edges.emplace_back(std::min(i, j), std::max(i, j));
        graph.weights.push_back(std::sqrt(d2));
      }
    }
  }
}

}  // namespace detail

// Builds the graph and runs one label-setting single-source shortest-path
// pass from x (binary heap, lazy deletion). Unreachable vertices keep
// distance infinity.
inline EpsGraph build_graph(const PointCloud& cloud, const double* x, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("build_graph: epsilon must be > 0");
  const std::size_t n = cloud.size();
  const int dim = cloud.dim;
  EpsGraph graph;
  graph.epsilon = epsilon;
  graph.n_vertices = n + 1;

  std::vector<double> flat((n + 1) * static_cast<std::size_t>(dim));
  std::copy(x, x + dim, flat.begin());
  std::copy(cloud.coords.begin(), cloud.coords.end(), flat.begin() + dim);
  detail::build_edges(flat, n + 1, dim, epsilon, graph);

  // Adjacency in CSR form.
  std::vector<std::size_t> degree(n + 1, 0);
  for (const auto& e : graph.edges) {
    ++degree[e.first];
    ++degree[e.second];
  }
  std::vector<std::size_t> offsets(n + 2, 0);
  for (std::size_t v = 0; v <= n; ++v) offsets[v + 1] = offsets[v] + degree[v];
  std::vector<std::pair<std::size_t, double>> adj(offsets[n + 1]);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [i, j] = graph.edges[e];
    const double w = graph.weights[e];
    adj[cursor[i]++] = {j, w};
    adj[cursor[j]++] = {i, w};
  }

  graph.dist_from_x.assign(n + 1, EpsGraph::inf);
  graph.dist_from_x[0] = 0.0;
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  heap.push({0.0, 0});
  while (!heap.empty()) {
    const auto [dist, v] = heap.top();
    heap.pop();
    if (dist > graph.dist_from_x[v]) continue;
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      const auto [to, w] = adj[k];
      const double cand = dist + w;
      if (cand < graph.dist_from_x[to]) {
        graph.dist_from_x[to] = cand;
        heap.push({cand, to});
      }
    }
  }
  return graph;
}

inline EpsGraph build_graph(const PointCloud& cloud, double epsilon) {
  return build_graph(cloud, cloud.x.data(), epsilon);
}

// Schedule for the graph radius: eps = 32 (p+1) log(n) / (f_min n). The
// density floor is a required input; the synthetic models have f_min = 0
// at the support edge, so callers pass an explicit surrogate.
inline double epsilon_schedule(std::size_t n, double p, double f_min) {
  if (f_min <= 0.0) throw std::invalid_argument("epsilon_schedule: f_min must be > 0");
  if (n < 2) throw std::invalid_argument("epsilon_schedule: n must be >= 2");
  return 32.0 * (p + 1.0) * std::log(static_cast<double>(n)) /
         (f_min * static_cast<double>(n));
}

// One-dimensional estimator using graph distances in place of chords:
// (1/(n h)) sum_i K(dist_graph(x, X_i) / h). Disconnected samples sit at
// infinite distance, where the profile vanishes, and contribute 0.
inline double estimate_1d(const PointCloud& cloud, const double* x, double h, int ell,
                          double p, double f_min) {
  if (h <= 0.0) throw std::invalid_argument("estimate_1d: h must be > 0");
  const std::size_t n = cloud.size();
  if (n == 0) throw std::domain_error("estimate_1d: empty cloud");
  if (n == 1) {
    // A lone sample admits exactly one path: its chord. The log-driven
    // radius schedule is undefined at n = 1, so bypass the graph.
    const double d = distance(x, cloud.point(0), cloud.dim);
    if (!(d < h)) return 0.0;
    return Kernel(1, ell).eval_radial(d / h) / h;
  }
  const double eps = epsilon_schedule(n, p, f_min);
  const EpsGraph graph = build_graph(cloud, x, eps);
  const Kernel kernel(1, ell);
  KahanSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = graph.dist_from_x[i + 1];
    if (!(d < h)) continue;  // also skips inf
    sum.add(kernel.eval_radial(d / h));
  }
  return sum.value() / (static_cast<double>(n) * h);
}

inline double estimate_1d(const PointCloud& cloud, double h, int ell, double p,
                          double f_min) {
  return estimate_1d(cloud, cloud.x.data(), h, ell, p, f_min);
}

// Edge list as CSV (i, j, weight) for offline inspection.
inline void write_edges_csv(const EpsGraph& graph, std::ostream& os) {
  os << "i,j,weight\n";
  char buf[96];
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", graph.edges[e].first,
                  graph.edges[e].second, graph.weights[e]);
    os << buf;
  }
}

}  // namespace manikde
