#include "linkex/bloom_protocol.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

namespace linkex {

namespace {

// Per-candidate bit positions, computed once per run.
struct CandidateTable {
  std::uint32_t k;
  std::vector<std::uint64_t> pos;  // id*k .. id*k+k-1

  CandidateTable(const LinkRegistry& reg, const BloomFilter& proto)
      : k(proto.k()) {
    pos.reserve(static_cast<std::size_t>(reg.size()) * k);
    for (std::uint32_t id = 0; id < reg.size(); ++id) {
      const Link& l = reg.link(id);
      for (std::uint64_t p : proto.positions(l.a, l.b)) pos.push_back(p);
    }
  }

  bool contained(const BloomFilter& bf, std::uint32_t id) const {
    const std::uint64_t* p = pos.data() + static_cast<std::size_t>(id) * k;
    for (std::uint32_t i = 0; i < k; ++i)
      if (!bf.test_bit(p[i])) return false;
    return true;
  }
};

LinkSet recover_with_table(const BloomFilter& bf, const CandidateTable& table,
                           std::uint32_t candidate_count) {
  LinkSet out(candidate_count);
  for (std::uint32_t id = 0; id < candidate_count; ++id)
    if (table.contained(bf, id)) out.insert(id);
  return out;
}

}  // namespace

BloomResult run_bloom(const Graph& g, const ProtocolConfig& cfg,
                      const BloomOptions& opts) {
  if (cfg.alpha < 0 || cfg.alpha > 1)
    throw std::invalid_argument("alpha must be in [0,1]");
  if (cfg.gamma != 1.0)
    throw std::invalid_argument("bloom scheme uses standard initialization (gamma = 1)");
  if (cfg.incremental)
    throw std::invalid_argument("incremental exchange applies to the baseline scheme");

  const std::uint32_t n = g.node_count();
  const std::uint32_t T = resolve_rounds(g, cfg);

  BloomResult result;
  InitialState init = register_initial_links(g, cfg.beta, 1.0, cfg.seed);
  result.registry = std::move(init.registry);
  const std::uint32_t m_links = result.registry.size();

  result.plan = plan_parameters(opts.fp_rate, g.edge_count());
  const std::uint64_t hash_seed = derive_seed(cfg.seed, stream::kHashSeed);

  result.coordinator.candidate_ids.resize(m_links);
  for (std::uint32_t id = 0; id < m_links; ++id)
    result.coordinator.candidate_ids[id] = id;

  BloomFilter prototype(result.plan.m, result.plan.k, hash_seed);
  CandidateTable table(result.registry, prototype);

  std::vector<BloomFilter> filters(n, prototype);
  for (std::uint32_t u = 0; u < n; ++u)
    init.views[u].for_each([&](std::uint32_t id) {
      const Link& l = result.registry.link(id);
      for (std::uint32_t i = 0; i < table.k; ++i)
        filters[u].set_bit(table.pos[static_cast<std::size_t>(id) * table.k + i]);
    });

  std::vector<std::uint32_t> snapshot_nodes = cfg.snapshot_nodes;
  const std::uint64_t filter_bytes = (result.plan.m + 7) / 8;

  auto record = [&](std::uint32_t t, std::uint64_t raw, std::uint64_t comp,
                    std::uint64_t ms) {
    RoundMetrics row;
    row.round = t;
    row.bytes_bloom_raw = raw;
    row.bytes_bloom_compressed = comp;
    row.wall_time_ms = ms;
    if (opts.per_round_recovery) {
      std::vector<std::uint32_t>& sizes = result.volumes.emplace_back(n, 0);
      std::uint64_t true_total = 0, total = 0;
      for (std::uint32_t u = 0; u < n; ++u) {
        LinkSet rec = recover_with_table(filters[u], table, m_links);
        sizes[u] = rec.count();
        total += rec.count();
        true_total += rec.count_below(result.registry.true_count());
      }
      row.true_links_total = true_total;
      row.fake_links_total = total - true_total;
      double denom = static_cast<double>(n) * static_cast<double>(g.edge_count()) *
                     (1.0 + 2.0 * cfg.beta);
      row.normalized_volume = denom > 0 ? static_cast<double>(total) / denom : 0.0;
      row.ratio = row.fake_links_total == 0
                      ? std::numeric_limits<double>::infinity()
                      : static_cast<double>(true_total) /
                            static_cast<double>(row.fake_links_total);
    }
    if (!snapshot_nodes.empty()) {
      std::vector<LinkSet>& snap = result.snapshots[t];
      for (std::uint32_t u : snapshot_nodes)
        snap.push_back(recover_with_table(filters.at(u), table, m_links));
    }
    result.rounds.push_back(row);
  };

  record(0, 0, 0, 0);

  std::vector<BloomFilter> next(filters);
  for (std::uint32_t t = 1; t <= T; ++t) {
    auto started = std::chrono::steady_clock::now();
    std::uint64_t raw = 0, comp = 0;
    next = filters;
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::uint32_t u : g.neighbors(v)) {
        raw += filter_bytes;
        if (cfg.alpha == 1.0) {
          next[u].merge(filters[v]);
          if (opts.compress_accounting) comp += filters[v].compress().size();
        } else {
          SplitMix64 rng = derive_stream(cfg.seed, stream::kErase, v, u, t);
          BloomFilter erased = filters[v].erase_bits(cfg.alpha, rng);
          next[u].merge(erased);
          if (opts.compress_accounting) comp += erased.compress().size();
        }
      }
    }
    filters.swap(next);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    record(t, raw, comp, static_cast<std::uint64_t>(elapsed.count()));
  }

  result.recovered.reserve(n);
  for (std::uint32_t u = 0; u < n; ++u)
    result.recovered.push_back(recover_with_table(filters[u], table, m_links));
  result.recovery_download_bytes = account_bytes_recovery(n, m_links);
  result.filters = std::move(filters);
  result.rounds_executed = T;
  return result;
}

LinkSet recover(const BloomFilter& bf, const LinkRegistry& registry) {
  LinkSet out(registry.size());
  for (std::uint32_t id = 0; id < registry.size(); ++id) {
    const Link& l = registry.link(id);
    if (bf.query(l.a, l.b)) out.insert(id);
  }
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> recover_exhaustive(
    const BloomFilter& bf, std::uint32_t node_count) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t a = 0; a < node_count; ++a)
    for (std::uint32_t b = a + 1; b < node_count; ++b)
      if (bf.query(a, b)) out.emplace_back(a, b);
  return out;
}

}  // namespace linkex
