#pragma once

#include <cstdint>
#include <vector>

#include "linkex/graph.hpp"
#include "linkex/links.hpp"

namespace linkex {

struct UtilityReport {
  std::uint32_t node = 0;
  std::uint32_t round = 0;
  double rel_err_pl = 0.0;
  double rel_err_cc = 0.0;
  double rel_err_apd = 0.0;
  double histogram_l1 = 0.0;  // L1 distance of normalized histograms, in [0,2]
  bool defined = true;        // false for degenerate local subgraphs
};

// Sort nodes by degree and take `count` evenly spaced ranks.
std::vector<std::uint32_t> degree_sample_nodes(const Graph& g, std::uint32_t count);

// |x - gt| / |gt|; zero ground truth yields 0 for zero x and NaN otherwise.
double relative_error(double x, double gt);

// Graph induced by the links of a view, over the nodes they mention.
Graph local_subgraph(const LinkSet& view, const LinkRegistry& registry);

// Relative metric errors of each sampled node's local view against the
// beta = 0 ground-truth view at the same round. Beyond 1e5 links the
// distance metrics fall back to sampled BFS sources.
std::vector<UtilityReport> evaluate_utility(
    const std::vector<LinkSet>& views, const LinkRegistry& registry,
    const std::vector<LinkSet>& ground_truth, const LinkRegistry& gt_registry,
    const std::vector<std::uint32_t>& nodes, std::uint32_t round,
    std::uint64_t seed);

}  // namespace linkex
