#include "linkex/privacy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace linkex {

namespace {

struct RankedLink {
  std::uint64_t freq;
  std::uint64_t tiebreak;
  std::uint32_t id;
};

AttackReport score_topk(std::vector<RankedLink>& ranked, std::uint32_t node,
                        const LinkRegistry& registry, double beta) {
  std::sort(ranked.begin(), ranked.end(), [](const RankedLink& x, const RankedLink& y) {
    if (x.freq != y.freq) return x.freq > y.freq;
    if (x.tiebreak != y.tiebreak) return x.tiebreak < y.tiebreak;
    return x.id < y.id;
  });
  AttackReport r;
  r.node = node;
  auto k = static_cast<std::uint64_t>(
      round_count(static_cast<double>(ranked.size()) / (1.0 + beta)));
  k = std::min<std::uint64_t>(k, ranked.size());
  r.k_threshold = k;
  std::uint64_t true_total = 0;
  for (const RankedLink& rl : ranked)
    if (registry.is_true(rl.id)) ++true_total;
  for (std::uint64_t i = 0; i < k; ++i)
    if (registry.is_true(ranked[i].id)) ++r.tp;
  r.fp = k - r.tp;
  r.fn = true_total - r.tp;
  r.tn = (ranked.size() - true_total) - r.fp;
  if (r.tp + r.fp > 0)
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  if (r.tp + r.fn > 0)
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  if (r.precision + r.recall > 0)
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

}  // namespace

AttackReport mount_attack(const NodeState& state, std::uint32_t node,
                          const LinkRegistry& registry, double beta,
                          std::uint64_t seed) {
  if (!state.view.freq_enabled())
    throw std::logic_error("mount_attack requires frequency tracking");
  SplitMix64 rng = derive_stream(seed, stream::kTieBreak, node);
  std::vector<RankedLink> ranked;
  state.view.for_each([&](std::uint32_t id) {
    if (registry.incident(id, node)) return;
    ranked.push_back({state.view.freq(id), rng.next(), id});
  });
  return score_topk(ranked, node, registry, beta);
}

AttackReport mount_attack_random(const LinkSet& view, std::uint32_t node,
                                 const LinkRegistry& registry, double beta,
                                 std::uint64_t seed) {
  SplitMix64 rng = derive_stream(seed, stream::kRandomAttack, node);
  std::vector<RankedLink> ranked;
  view.for_each([&](std::uint32_t id) {
    if (registry.incident(id, node)) return;
    ranked.push_back({0, rng.next(), id});
  });
  return score_topk(ranked, node, registry, beta);
}

double ratio_true_fake(std::span<const LinkSet> views,
                       const LinkRegistry& registry) {
  std::uint64_t true_total = 0, total = 0;
  for (const LinkSet& v : views) {
    true_total += v.count_below(registry.true_count());
    total += v.count();
  }
  std::uint64_t fake_total = total - true_total;
  if (fake_total == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(true_total) / static_cast<double>(fake_total);
}

double ratio_true_fake(std::span<const NodeState> nodes,
                       const LinkRegistry& registry) {
  std::uint64_t true_total = 0, total = 0;
  for (const NodeState& ns : nodes) {
    true_total += ns.view.count_below(registry.true_count());
    total += ns.view.count();
  }
  std::uint64_t fake_total = total - true_total;
  if (fake_total == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(true_total) / static_cast<double>(fake_total);
}

}  // namespace linkex
