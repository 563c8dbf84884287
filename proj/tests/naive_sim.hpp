#pragma once

// Clear-form reference simulator for the baseline exchange: per-node
// std::set views, explicit per-edge messages, same derived random streams as
// the bitset engine. Test-only oracle.

#include <set>
#include <vector>

#include "linkex/graph.hpp"
#include "linkex/links.hpp"
#include "linkex/protocol.hpp"

namespace linkex::testing {

struct NaiveSim {
  const Graph& g;
  const LinkRegistry& reg;
  double alpha;
  std::uint64_t seed;
  std::vector<std::set<std::uint32_t>> views;
  std::vector<std::uint64_t> round_bytes;

  NaiveSim(const Graph& graph, const InitialState& init, double a, std::uint64_t s)
      : g(graph), reg(init.registry), alpha(a), seed(s) {
    views.resize(g.node_count());
    for (std::uint32_t u = 0; u < g.node_count(); ++u)
      init.views[u].for_each([&](std::uint32_t id) { views[u].insert(id); });
  }

  std::vector<std::uint32_t> make_message(std::uint32_t sender,
                                          std::uint32_t receiver,
                                          std::uint32_t round) const {
    std::vector<std::uint32_t> pool(views[sender].begin(), views[sender].end());
    auto take = static_cast<std::size_t>(
        round_count(alpha * static_cast<double>(pool.size())));
    SplitMix64 rng = derive_stream(seed, stream::kMessage, sender, receiver, round);
    for (std::size_t i = 0; i < take; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
  }

  void step(std::uint32_t round) {
    std::vector<std::vector<std::uint32_t>> inbox(g.node_count());
    std::uint64_t bytes = 0;
    g.for_each_edge([&](std::uint32_t u, std::uint32_t v) {
      std::vector<std::uint32_t> uv = make_message(u, v, round);
      std::vector<std::uint32_t> vu = make_message(v, u, round);
      bytes += account_bytes_baseline(uv, reg);
      bytes += account_bytes_baseline(vu, reg);
      for (std::uint32_t id : uv) inbox[v].push_back(id);
      for (std::uint32_t id : vu) inbox[u].push_back(id);
    });
    for (std::uint32_t u = 0; u < g.node_count(); ++u)
      views[u].insert(inbox[u].begin(), inbox[u].end());
    round_bytes.push_back(bytes);
  }

  bool matches(const LinkSet& bits, std::uint32_t node) const {
    if (bits.count() != views[node].size()) return false;
    bool ok = true;
    bits.for_each([&](std::uint32_t id) { ok = ok && views[node].count(id) > 0; });
    return ok;
  }
};

}  // namespace linkex::testing
