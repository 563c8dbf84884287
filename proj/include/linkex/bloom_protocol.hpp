#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "linkex/bloom.hpp"
#include "linkex/graph.hpp"
#include "linkex/links.hpp"
#include "linkex/protocol.hpp"

namespace linkex {

// Collects every round-0 noisy link; its list drives final membership
// recovery. By construction the registry covers exactly the union of all
// L_u(0), so candidates are simply all registered ids.
struct Coordinator {
  std::vector<std::uint32_t> candidate_ids;
};

struct BloomOptions {
  double fp_rate = 0.1;
  // Recover every node's view after each round (the per-round volume and
  // ratio curves need it; disable for big runs where only the final
  // recovery matters).
  bool per_round_recovery = true;
  // Account compressed wire sizes per transmitted filter.
  bool compress_accounting = false;
};

struct BloomResult {
  LinkRegistry registry;
  Coordinator coordinator;
  BloomPlan plan{};
  std::vector<BloomFilter> filters;    // final per-node filters
  std::vector<LinkSet> recovered;      // final recovered views
  std::vector<RoundMetrics> rounds;
  std::vector<std::vector<std::uint32_t>> volumes;  // [round][node], when recovered
  std::map<std::uint32_t, std::vector<LinkSet>> snapshots;
  std::uint64_t recovery_download_bytes = 0;
  std::uint32_t rounds_executed = 0;
};

// Alg. "Bloom filter exchange": per-edge erased filters, OR aggregation, and
// candidate-list recovery after the last round.
BloomResult run_bloom(const Graph& g, const ProtocolConfig& cfg,
                      const BloomOptions& opts);

// Candidate-list recovery: ids whose k positions are all set.
LinkSet recover(const BloomFilter& bf, const LinkRegistry& registry);

// Coordinator-free recovery for tiny graphs: probes all n(n-1)/2 pairs and
// returns the accepted ones (true members, fakes, and phantom pairs alike).
std::vector<std::pair<std::uint32_t, std::uint32_t>> recover_exhaustive(
    const BloomFilter& bf, std::uint32_t node_count);

}  // namespace linkex
