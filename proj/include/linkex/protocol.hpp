#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "linkex/graph.hpp"
#include "linkex/links.hpp"

namespace linkex {

struct ProtocolConfig {
  double alpha = 1.0;   // fraction of links shared per neighbor per round
  double beta = 0.0;    // fake-link budget relative to degree
  double gamma = 1.0;   // fraction of fakes created up front (< 1 enables
                        // two-round initialization)
  std::uint32_t rounds = 0;  // 0 = run for Diam(G) rounds
  std::uint64_t seed = 0;
  bool track_freq = false;
  bool incremental = false;  // valid only with alpha = 1
  bool account_bytes = true;

  // With track_freq set: nodes whose arrival counters are maintained
  // (empty = all nodes).
  std::vector<std::uint32_t> freq_nodes;
  // Nodes whose views are snapshotted after every round (utility evaluation).
  std::vector<std::uint32_t> snapshot_nodes;
};

struct NodeState {
  LinkSet view;                            // L_u(T)
  std::vector<std::uint32_t> known_true;   // incident true-link ids
  std::vector<std::uint32_t> own_fakes;    // fake ids this node created
  LinkSet new_since_last;                  // incremental mode only
};

struct RoundMetrics {
  std::uint32_t round = 0;
  std::uint64_t true_links_total = 0;
  std::uint64_t fake_links_total = 0;
  double normalized_volume = 0.0;  // (true+fake)/(N*M*(1+2*beta))
  double ratio = 0.0;              // true/fake, +inf when no fakes
  std::uint64_t bytes_baseline = 0;
  std::uint64_t bytes_bloom_raw = 0;
  std::uint64_t bytes_bloom_compressed = 0;
  std::uint64_t wall_time_ms = 0;
};

struct BaselineResult {
  LinkRegistry registry;
  std::vector<NodeState> nodes;
  std::vector<RoundMetrics> rounds;                   // rows t = 0..T
  std::vector<std::vector<std::uint32_t>> volumes;    // [round][node] view size
  std::map<std::uint32_t, std::vector<LinkSet>> snapshots;  // round -> views
  std::uint32_t rounds_executed = 0;
};

// Alg. 1 executed in synchronous rounds over bit sets. Deterministic for a
// fixed (graph, config, seed): all sampling runs off per-(sender, receiver,
// round) streams. gamma < 1 switches initialization to the two-round scheme,
// which consumes exchange round 1.
BaselineResult run_baseline(const Graph& g, const ProtocolConfig& cfg);

// Two-round initialization on its own: returns registry and views at t = 1.
struct TwoRoundInit {
  LinkRegistry registry;
  std::vector<LinkSet> views;
  std::uint64_t fallback_fakes = 0;  // stage-2 fakes that fell back to
                                     // uniform targets
};
TwoRoundInit two_round_init(const Graph& g, const ProtocolConfig& cfg);

// Grouped message encoding: 4 bytes per distinct first endpoint plus 4 per
// link.
std::uint64_t account_bytes_baseline(std::span<const std::uint32_t> ids,
                                     const LinkRegistry& reg);

// Recovery download: each of the n nodes fetches the candidate list in
// grouped form, amortized 4 bytes per link.
std::uint64_t account_bytes_recovery(std::uint64_t n_nodes,
                                     std::uint64_t candidate_count);

std::uint32_t resolve_rounds(const Graph& g, const ProtocolConfig& cfg);

}  // namespace linkex
