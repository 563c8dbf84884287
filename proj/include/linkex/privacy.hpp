#pragma once

#include <cstdint>
#include <span>

#include "linkex/links.hpp"
#include "linkex/protocol.hpp"

namespace linkex {

struct AttackReport {
  std::uint32_t node = 0;
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  std::uint64_t k_threshold = 0;
};

// Frequency inference attack at node u: rank the links of B_u (its view
// minus everything incident to u) by arrival count, declare the top
// K = round(|B_u|/(1+beta)) true, and score against the registry. Ties break
// uniformly at random from a stream seeded by (seed, node). Requires
// frequency tracking on the node's view.
AttackReport mount_attack(const NodeState& state, std::uint32_t node,
                          const LinkRegistry& registry, double beta,
                          std::uint64_t seed);

// The bloom scheme obfuscates frequencies, so its attacker degrades to a
// uniform top-K guess over B_u.
AttackReport mount_attack_random(const LinkSet& view, std::uint32_t node,
                                 const LinkRegistry& registry, double beta,
                                 std::uint64_t seed);

// Aggregate true/fake membership ratio over all views; +inf when no node
// holds any fake link.
double ratio_true_fake(std::span<const LinkSet> views,
                       const LinkRegistry& registry);
double ratio_true_fake(std::span<const NodeState> nodes,
                       const LinkRegistry& registry);

}  // namespace linkex
