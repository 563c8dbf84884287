#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "linkex/graph.hpp"

namespace linkex {

// LU(t) = (I + alpha*A)^t (1+beta) D via repeated sparse matrix-vector
// products. Entry u bounds the multiset link count at node u after t rounds.
std::vector<double> upper_bound_lu(const Graph& g, double alpha, double beta,
                                   std::uint32_t t);

// Same recursion from an explicit start vector. Bounding a simulated run
// needs the realized initial view sizes (fake budgets are rounded), not the
// idealized (1+beta) D. With message_rounding_slack the recursion adds
// d_u/2 per step, covering round(alpha*|L|) message sizes that exceed
// alpha*|L| by up to half a link (only relevant for alpha < 1).
std::vector<double> upper_bound_lu(const Graph& g, double alpha,
                                   std::vector<double> initial, std::uint32_t t,
                                   bool message_rounding_slack = false);

// Sum of propagation weights C = sum_{t=1..T} (alpha*A)^t for the
// convergence conditions at alpha < 1. Dense; limited to small graphs.
struct ConvergenceReport {
  std::uint32_t n = 0;
  std::uint32_t rounds = 0;
  double alpha = 0.0;
  std::vector<double> coverage;  // row-major, coverage[v*n+u] = C_{vu}

  double at(std::uint32_t v, std::uint32_t u) const { return coverage[static_cast<std::size_t>(v) * n + u]; }
  // True link (v,w) guaranteed to reach u within `rounds`.
  bool true_link_guaranteed(std::uint32_t u, std::uint32_t v, std::uint32_t w) const {
    return at(v, u) + at(w, u) >= 1.0;
  }
  // Fake link originated at v guaranteed to reach u.
  bool fake_link_guaranteed(std::uint32_t u, std::uint32_t v) const {
    return at(v, u) >= 1.0;
  }
};

ConvergenceReport check_convergence(const Graph& g, double alpha, std::uint32_t T);

// Facts for alpha = 1: exact arrival rounds from BFS distances.
inline std::uint32_t true_link_arrival_round(std::span<const std::uint32_t> dist_v,
                                             std::span<const std::uint32_t> dist_w,
                                             std::uint32_t u) {
  return std::min(dist_v[u], dist_w[u]);
}
inline std::uint32_t fake_link_arrival_round(std::span<const std::uint32_t> dist_origin,
                                             std::uint32_t u) {
  return dist_origin[u];
}

}  // namespace linkex
