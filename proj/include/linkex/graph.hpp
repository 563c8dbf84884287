#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace linkex {

inline constexpr std::uint32_t kUnreachable =
    std::numeric_limits<std::uint32_t>::max();

// Undirected simple graph, CSR adjacency, immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Takes an edge list (self-loops rejected, duplicates collapsed) and
  // builds sorted symmetric adjacency.
  static Graph from_edges(std::uint32_t node_count,
                          std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  std::uint32_t node_count() const { return node_count_; }
  std::uint64_t edge_count() const { return edge_count_; }

  std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }
  std::uint32_t degree(std::uint32_t u) const {
    return static_cast<std::uint32_t>(offsets_[u + 1] - offsets_[u]);
  }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;

  std::vector<std::uint32_t> degree_sequence() const;

  // Calls f(u, v) once per edge with u < v.
  template <class F>
  void for_each_edge(F&& f) const {
    for (std::uint32_t u = 0; u < node_count_; ++u)
      for (std::uint32_t v : neighbors(u))
        if (u < v) f(u, v);
  }

 private:
  std::uint32_t node_count_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint32_t> adj_;
};

struct GraphMetrics {
  std::uint32_t diameter = 0;
  double avg_path_distance = 0.0;
  std::vector<double> distance_histogram;  // index = path length, sums to 1
  double clustering_coefficient = 0.0;
  double powerlaw_exponent = 0.0;
};

// G(n,M): exactly m_target distinct edges drawn uniformly without
// replacement. Warns on stderr when the result is disconnected.
Graph generate_er(std::uint32_t n, std::uint64_t m_target, std::uint64_t seed);

// Barabasi-Albert: clique on attach_m seed nodes, then each arrival attaches
// attach_m preferential edges without duplicates.
Graph generate_ba(std::uint32_t n, std::uint32_t attach_m, std::uint64_t seed);

// Edge-list text format: one "u v" per line, 0-based IDs.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list_file(const Graph& g, const std::string& path);

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source);

// Nodes of the largest connected component, ascending.
std::vector<std::uint32_t> largest_component(const Graph& g);

std::uint64_t triangle_count(const Graph& g);
std::uint64_t connected_triple_count(const Graph& g);

// Continuous MLE of the degree-sequence power-law exponent with the usual
// half-step correction, d_min = smallest positive degree.
double powerlaw_exponent_mle(const std::vector<std::uint32_t>& degrees);

// Exact metrics when pair_sample is empty (BFS from every node of the
// largest component); otherwise estimates from pair_sample BFS sources.
GraphMetrics compute_metrics(const Graph& g,
                             std::optional<std::uint32_t> pair_sample = {},
                             std::uint64_t seed = 0);

std::uint32_t diameter(const Graph& g);

}  // namespace linkex
