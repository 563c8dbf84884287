#include "linkex/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "linkex/rng.hpp"

namespace linkex {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Graph Graph::from_edges(std::uint32_t node_count,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  Graph g;
  g.node_count_ = node_count;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  std::vector<std::uint32_t> degree(node_count, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> unique;
  unique.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loop in edge list");
    if (u >= node_count || v >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (!seen.insert(pair_key(u, v)).second) continue;
    unique.emplace_back(u, v);
    ++degree[u];
    ++degree[v];
  }
  g.edge_count_ = unique.size();
  g.offsets_.assign(node_count + 1, 0);
  for (std::uint32_t u = 0; u < node_count; ++u)
    g.offsets_[u + 1] = g.offsets_[u] + degree[u];
  g.adj_.resize(g.offsets_[node_count]);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : unique) {
    g.adj_[cursor[u]++] = v;
    g.adj_[cursor[v]++] = u;
  }
  for (std::uint32_t u = 0; u < node_count; ++u) {
    auto begin = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
    auto end = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
    std::sort(begin, end);
  }
  return g;
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::uint32_t> Graph::degree_sequence() const {
  std::vector<std::uint32_t> d(node_count_);
  for (std::uint32_t u = 0; u < node_count_; ++u) d[u] = degree(u);
  return d;
}

Graph generate_er(std::uint32_t n, std::uint64_t m_target, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_er: empty graph");
  std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m_target > max_edges)
    throw std::invalid_argument("generate_er: m_target exceeds n(n-1)/2");
  SplitMix64 rng = derive_stream(seed, stream::kGraphGen, 0);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m_target * 2);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(m_target);
  while (edges.size() < m_target) {
    auto u = static_cast<std::uint32_t>(rng.below(n));
    auto v = static_cast<std::uint32_t>(rng.below(n));
    if (u == v) continue;
    if (!seen.insert(pair_key(u, v)).second) continue;
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  Graph g = Graph::from_edges(n, std::move(edges));
  if (largest_component(g).size() != n)
    std::cerr << "warning: generated ER graph is not connected\n";
  return g;
}

Graph generate_ba(std::uint32_t n, std::uint32_t attach_m, std::uint64_t seed) {
  if (attach_m < 1 || n <= attach_m)
    throw std::invalid_argument("generate_ba: need attach_m >= 1 and n > attach_m");
  SplitMix64 rng = derive_stream(seed, stream::kGraphGen, 1);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  // Endpoint multiset; picking a uniform element weights nodes by degree.
  std::vector<std::uint32_t> endpoints;
  edges.reserve(static_cast<std::size_t>(attach_m) * n);
  for (std::uint32_t u = 0; u < attach_m; ++u)
    for (std::uint32_t v = u + 1; v < attach_m; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  std::vector<std::uint32_t> picked;
  for (std::uint32_t u = attach_m; u < n; ++u) {
    picked.clear();
    while (picked.size() < attach_m) {
      std::uint32_t target;
      if (endpoints.empty()) {
        // attach_m == 1: first arrival has no endpoints yet, attach to node 0.
        target = 0;
      } else {
        target = endpoints[rng.below(endpoints.size())];
      }
      if (target == u) continue;
      if (std::find(picked.begin(), picked.end(), target) != picked.end())
        continue;
      picked.push_back(target);
    }
    for (std::uint32_t v : picked) {
      edges.emplace_back(v, u);
      endpoints.push_back(v);
      endpoints.push_back(u);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t max_node = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint32_t u, v;
    if (!(ls >> u >> v)) throw std::runtime_error("malformed edge-list line: " + line);
    if (u == v) throw std::runtime_error("edge list contains self-loop");
    edges.emplace_back(u, v);
    max_node = std::max({max_node, u, v});
  }
  if (edges.empty()) throw std::runtime_error("empty edge list");
  return Graph::from_edges(max_node + 1, std::move(edges));
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return load_edge_list(in);
}

void save_edge_list(const Graph& g, std::ostream& out) {
  g.for_each_edge([&](std::uint32_t u, std::uint32_t v) {
    out << u << ' ' << v << '\n';
  });
}

void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  save_edge_list(g, out);
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source) {
  if (source >= g.node_count())
    throw std::invalid_argument("bfs_distances: source out of range");
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<std::uint32_t> frontier{source};
  dist[source] = 0;
  std::vector<std::uint32_t> next;
  std::uint32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (std::uint32_t u : frontier)
      for (std::uint32_t v : g.neighbors(u))
        if (dist[v] == kUnreachable) {
          dist[v] = level;
          next.push_back(v);
        }
    frontier.swap(next);
  }
  return dist;
}

std::vector<std::uint32_t> largest_component(const Graph& g) {
  std::vector<std::uint32_t> comp(g.node_count(), kUnreachable);
  std::uint32_t ncomp = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kUnreachable) continue;
    comp[s] = ncomp;
    stack.push_back(s);
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t v : g.neighbors(u))
        if (comp[v] == kUnreachable) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
    }
    ++ncomp;
  }
  std::vector<std::uint64_t> sizes(ncomp, 0);
  for (std::uint32_t u = 0; u < g.node_count(); ++u) ++sizes[comp[u]];
  std::uint32_t best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<std::uint32_t> nodes;
  nodes.reserve(sizes[best]);
  for (std::uint32_t u = 0; u < g.node_count(); ++u)
    if (comp[u] == best) nodes.push_back(u);
  return nodes;
}

std::uint64_t triangle_count(const Graph& g) {
  std::uint64_t total = 0;
  g.for_each_edge([&](std::uint32_t u, std::uint32_t v) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) ++i;
      else if (a[i] > b[j]) ++j;
      else { ++total; ++i; ++j; }
    }
  });
  // Each triangle is counted once per incident edge.
  return total / 3;
}

std::uint64_t connected_triple_count(const Graph& g) {
  std::uint64_t total = 0;
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    std::uint64_t d = g.degree(u);
    total += d * (d - 1) / 2;
  }
  return total;
}

double powerlaw_exponent_mle(const std::vector<std::uint32_t>& degrees) {
  std::uint32_t d_min = kUnreachable;
  for (std::uint32_t d : degrees)
    if (d > 0) d_min = std::min(d_min, d);
  if (d_min == kUnreachable) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  std::uint64_t n = 0;
  for (std::uint32_t d : degrees) {
    if (d < d_min) continue;
    sum += std::log(d / (d_min - 0.5));
    ++n;
  }
  return 1.0 + static_cast<double>(n) / sum;
}

namespace {

struct BfsAccum {
  std::vector<std::uint64_t> level_counts;
  std::uint32_t max_dist = 0;

  void absorb(const std::vector<std::uint32_t>& dist) {
    for (std::uint32_t d : dist) {
      if (d == kUnreachable || d == 0) continue;
      if (d >= level_counts.size()) level_counts.resize(d + 1, 0);
      ++level_counts[d];
      max_dist = std::max(max_dist, d);
    }
  }

  void merge(const BfsAccum& o) {
    if (o.level_counts.size() > level_counts.size())
      level_counts.resize(o.level_counts.size(), 0);
    for (std::size_t i = 0; i < o.level_counts.size(); ++i)
      level_counts[i] += o.level_counts[i];
    max_dist = std::max(max_dist, o.max_dist);
  }
};

}  // namespace

GraphMetrics compute_metrics(const Graph& g, std::optional<std::uint32_t> pair_sample,
                             std::uint64_t seed) {
  if (g.node_count() == 0)
    throw std::invalid_argument("compute_metrics: empty graph");
  GraphMetrics m;

  std::uint64_t triples = connected_triple_count(g);
  m.clustering_coefficient =
      triples == 0 ? 0.0
                   : 3.0 * static_cast<double>(triangle_count(g)) /
                         static_cast<double>(triples);
  m.powerlaw_exponent = powerlaw_exponent_mle(g.degree_sequence());

  std::vector<std::uint32_t> lcc = largest_component(g);
  if (lcc.size() != g.node_count())
    std::cerr << "warning: metrics computed on largest component ("
              << lcc.size() << " of " << g.node_count() << " nodes)\n";

  std::vector<std::uint32_t> sources = lcc;
  if (pair_sample && *pair_sample < lcc.size()) {
    SplitMix64 rng = derive_stream(seed, stream::kMetricsSample);
    partial_shuffle(sources, *pair_sample, rng);
    sources.resize(*pair_sample);
  }

  unsigned n_threads = std::min<unsigned>(std::thread::hardware_concurrency(),
                                          sources.size() > 256 ? 8u : 1u);
  if (n_threads == 0) n_threads = 1;
  std::vector<BfsAccum> parts(n_threads);
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < sources.size(); i += n_threads)
      parts[t].absorb(bfs_distances(g, sources[i]));
  };
  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(work, t);
    for (auto& th : threads) th.join();
  }
  BfsAccum acc;
  for (const BfsAccum& p : parts) acc.merge(p);

  m.diameter = acc.max_dist;
  std::uint64_t pair_count = 0;
  double dist_sum = 0.0;
  for (std::size_t d = 1; d < acc.level_counts.size(); ++d) {
    pair_count += acc.level_counts[d];
    dist_sum += static_cast<double>(d) * static_cast<double>(acc.level_counts[d]);
  }
  m.distance_histogram.assign(acc.max_dist + 1, 0.0);
  if (pair_count > 0) {
    for (std::size_t d = 1; d < acc.level_counts.size(); ++d)
      m.distance_histogram[d] =
          static_cast<double>(acc.level_counts[d]) / static_cast<double>(pair_count);
    m.avg_path_distance = dist_sum / static_cast<double>(pair_count);
  }
  return m;
}

std::uint32_t diameter(const Graph& g) {
  return compute_metrics(g).diameter;
}

}  // namespace linkex
