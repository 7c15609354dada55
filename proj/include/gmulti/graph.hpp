#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gmulti/distance.hpp"
#include "gmulti/errors.hpp"

namespace gmulti {

// Undirected edge with u < v; nodes are 0-based window-local indices.
struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  friend bool operator==(Edge a, Edge b) { return a.u == b.u && a.v == b.v; }
  friend bool operator<(Edge a, Edge b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  }
};

// Union of k mutually edge-disjoint minimum spanning trees (orthogonal MSTs).
class SimilarityGraph {
 public:
  SimilarityGraph() = default;
  SimilarityGraph(std::size_t n_nodes, unsigned k, std::vector<Edge> edges)
      : n_nodes_(n_nodes), k_(k), edges_(std::move(edges)) {}

  std::size_t n_nodes() const { return n_nodes_; }
  unsigned k() const { return k_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  std::vector<std::uint32_t> degrees() const {
    std::vector<std::uint32_t> deg(n_nodes_, 0);
    for (const Edge e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

 private:
  std::size_t n_nodes_ = 0;
  unsigned k_ = 1;
  std::vector<Edge> edges_;
};

namespace detail {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { reset(); }

  void reset() { std::iota(parent_.begin(), parent_.end(), std::uint32_t{0}); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if already joined.
  bool unite(std::uint32_t a, std::uint32_t b) {
    const std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent_[ra] = rb;
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

// Builds the k-MST similarity graph of a window: repeatedly extract an MST of
// the complete graph restricted to still-unused edges, k times. Equal-weight
// edges are ordered by (min node, max node) so the construction is identical
// on every platform. If the residual graph stops spanning, the round keeps a
// maximal spanning forest and construction ends early.
inline SimilarityGraph build_kmst(const DistanceMatrix& dist, unsigned k) {
  const std::size_t n = dist.size();
  if (k < 1) throw ConfigError("k-MST multiplicity must be >= 1");
  if (n < 2) throw InvalidData("k-MST needs at least 2 observations");

  struct WEdge {
    double w;
    std::uint32_t u, v;
  };
  std::vector<WEdge> all;
  all.reserve(n * (n - 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) all.push_back({dist(i, j), i, j});
  std::sort(all.begin(), all.end(), [](const WEdge& a, const WEdge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  std::vector<char> used(all.size(), 0);
  detail::DisjointSet uf(n);
  std::vector<Edge> edges;
  edges.reserve(k * (n - 1));
  for (unsigned round = 0; round < k; ++round) {
    uf.reset();
    std::size_t added = 0;
    for (std::size_t i = 0; i < all.size() && added < n - 1; ++i) {
      if (used[i]) continue;
      if (uf.unite(all[i].u, all[i].v)) {
        used[i] = 1;
        edges.push_back({all[i].u, all[i].v});
        ++added;
      }
    }
    if (added < n - 1) break;  // residual graph no longer spans
  }
  std::sort(edges.begin(), edges.end());
  return SimilarityGraph(n, k, std::move(edges));
}

enum class GraphStage { search, prune };

// Graph multiplicity rule: square root of the window length, capped (large cap
// while searching, small cap while pruning), never below 1.
inline unsigned default_k(std::size_t window_len, unsigned cap) {
  const unsigned root =
      static_cast<unsigned>(std::floor(std::sqrt(static_cast<double>(window_len))));
  return std::max(1u, std::min(cap, root));
}

inline unsigned default_k(std::size_t window_len, GraphStage stage) {
  return default_k(window_len, stage == GraphStage::search ? 30u : 5u);
}

// Node-level summaries of a similarity graph used by the scan statistics.
struct GraphStats {
  std::vector<std::uint32_t> degrees;
  std::size_t num_edges = 0;
  double sum_deg_sq = 0.0;   // sum over nodes of degree^2
  double v_g = 0.0;          // sum_deg_sq - 4 |G|^2 / n
  double two_hop_sq_sum = 0.0;  // sum over nodes of (#edges within one hop)^2
};

inline GraphStats graph_stats(const SimilarityGraph& g) {
  const std::size_t n = g.n_nodes();
  GraphStats s;
  s.degrees = g.degrees();
  s.num_edges = g.num_edges();
  for (const auto d : s.degrees) s.sum_deg_sq += static_cast<double>(d) * d;
  const double e = static_cast<double>(s.num_edges);
  s.v_g = s.sum_deg_sq - 4.0 * e * e / static_cast<double>(n);

  // Edges within one hop of node i: at least one endpoint among the nodes
  // touched by i's incident edges ({i} ∪ N(i)); isolated nodes contribute 0.
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const Edge e2 : g.edges()) {
    adj[e2.u].push_back(e2.v);
    adj[e2.v].push_back(e2.u);
  }
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].empty()) continue;
    ++id;
    stamp[i] = id;
    for (const auto nb : adj[i]) stamp[nb] = id;
    double cnt = 0;
    for (const Edge e2 : g.edges())
      if (stamp[e2.u] == id || stamp[e2.v] == id) cnt += 1.0;
    s.two_hop_sq_sum += cnt * cnt;
  }
  return s;
}

}  // namespace gmulti
