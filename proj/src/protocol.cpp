#include "linkex/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace linkex {

namespace {

// Distinct canonical first endpoints of a node-id stamped message.
class GroupCounter {
 public:
  explicit GroupCounter(std::uint32_t n) : stamp_(n, 0) {}

  std::uint64_t count(std::span<const std::uint32_t> ids, const LinkRegistry& reg) {
    ++gen_;
    std::uint64_t groups = 0;
    for (std::uint32_t id : ids) {
      std::uint32_t a = reg.link(id).a;
      if (stamp_[a] != gen_) {
        stamp_[a] = gen_;
        ++groups;
      }
    }
    return groups;
  }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t gen_ = 0;
};

class Engine {
 public:
  Engine(const Graph& g, const ProtocolConfig& cfg) : g_(g), cfg_(cfg) {}

  BaselineResult run() {
    validate();
    const std::uint32_t n = g_.node_count();
    rounds_total_ = resolve_rounds(g_, cfg_);

    InitialState init = register_initial_links(
        g_, cfg_.beta, cfg_.gamma < 1.0 ? cfg_.gamma : 1.0, cfg_.seed);
    registry_ = std::move(init.registry);
    views_ = std::move(init.views);
    next_ = views_;

    tracked_.assign(n, false);
    if (cfg_.track_freq) {
      if (cfg_.freq_nodes.empty()) {
        tracked_.assign(n, true);
      } else {
        for (std::uint32_t u : cfg_.freq_nodes) tracked_.at(u) = true;
      }
      for (std::uint32_t u = 0; u < n; ++u)
        if (tracked_[u]) views_[u].enable_freq();
    }

    if (cfg_.account_bytes) {
      group_counter_.emplace(n);
      if (cfg_.alpha == 1.0 && !cfg_.incremental) init_source_sets();
    }
    if (cfg_.incremental) {
      new_sets_.resize(n);
      for (std::uint32_t u = 0; u < n; ++u) new_sets_[u] = views_[u];
    }
    if (cfg_.gamma < 1.0) {
      fake_incident_.assign(n, 0);
      for (std::uint32_t id = registry_.true_count(); id < registry_.size(); ++id) {
        ++fake_incident_[registry_.link(id).a];
        ++fake_incident_[registry_.link(id).b];
      }
    }

    record_round(0, 0, 0);
    snapshot(0);

    for (std::uint32_t t = 1; t <= rounds_total_; ++t) {
      auto started = std::chrono::steady_clock::now();
      std::uint64_t bytes = execute_round(t);
      if (t == 1 && cfg_.gamma < 1.0) stage2_fakes();
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      record_round(t, bytes, static_cast<std::uint64_t>(elapsed.count()));
      snapshot(t);
    }

    return finalize();
  }

  std::uint64_t fallback_fakes() const { return fallback_fakes_; }

 private:
  void validate() const {
    if (cfg_.alpha < 0 || cfg_.alpha > 1)
      throw std::invalid_argument("alpha must be in [0,1]");
    if (cfg_.beta < 0) throw std::invalid_argument("beta must be nonnegative");
    if (cfg_.gamma < 0 || cfg_.gamma > 1)
      throw std::invalid_argument("gamma must be in [0,1]");
    if (cfg_.incremental && cfg_.alpha != 1.0)
      throw std::invalid_argument("incremental exchange requires alpha = 1");
    if (cfg_.incremental && cfg_.gamma < 1.0)
      throw std::invalid_argument("incremental exchange requires gamma = 1");
  }

  void init_source_sets() {
    const std::uint32_t n = g_.node_count();
    src_words_.assign(n, std::vector<std::uint64_t>((n + 63) / 64, 0));
    src_count_.assign(n, 0);
    for (std::uint32_t u = 0; u < n; ++u)
      views_[u].for_each([&](std::uint32_t id) { mark_source(u, id); });
  }

  void mark_source(std::uint32_t u, std::uint32_t id) {
    std::uint32_t a = registry_.link(id).a;
    std::uint64_t& w = src_words_[u][a >> 6];
    std::uint64_t m = 1ULL << (a & 63);
    if (!(w & m)) {
      w |= m;
      ++src_count_[u];
    }
  }

  // One synchronous round: all messages are drawn from the t-1 snapshot in
  // views_, merged into next_, then the buffers swap.
  std::uint64_t execute_round(std::uint32_t t) {
    const std::uint32_t n = g_.node_count();
    next_ = views_;
    std::uint64_t bytes = 0;

    if (cfg_.incremental) {
      for (std::uint32_t v = 0; v < n; ++v) {
        if (new_sets_[v].empty()) continue;
        std::vector<std::uint32_t> ids = new_sets_[v].ids();
        std::uint64_t msg_bytes = 0;
        if (group_counter_)
          msg_bytes = 4 * (group_counter_->count(ids, registry_) + ids.size());
        for (std::uint32_t u : g_.neighbors(v)) {
          next_[u].union_into(new_sets_[v]);
          bytes += msg_bytes;
        }
      }
      for (std::uint32_t u = 0; u < n; ++u) diff_into_new_set(u);
    } else if (cfg_.alpha == 1.0) {
      if (group_counter_) {
        for (std::uint32_t v = 0; v < n; ++v) {
          std::uint64_t msg_bytes = 4 * (src_count_[v] + views_[v].count());
          bytes += msg_bytes * g_.degree(v);
        }
      }
      for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v : g_.neighbors(u)) next_[u].union_into(views_[v]);
      if (group_counter_) {
        for (std::uint32_t u = 0; u < n; ++u) {
          auto prev = views_[u].words();
          auto now = next_[u].words();
          for (std::size_t i = 0; i < now.size(); ++i) {
            std::uint64_t fresh = now[i] & ~prev[i];
            while (fresh) {
              auto id = static_cast<std::uint32_t>((i << 6) + std::countr_zero(fresh));
              fresh &= fresh - 1;
              mark_source(u, id);
            }
          }
        }
      }
    } else if (cfg_.alpha > 0.0) {
      std::vector<std::uint32_t> pool;
      std::vector<std::uint32_t> scratch;
      for (std::uint32_t v = 0; v < n; ++v) {
        pool = views_[v].ids();
        auto take = static_cast<std::size_t>(
            round_count(cfg_.alpha * static_cast<double>(pool.size())));
        for (std::uint32_t u : g_.neighbors(v)) {
          SplitMix64 rng = derive_stream(cfg_.seed, stream::kMessage, v, u, t);
          scratch = pool;
          partial_shuffle(scratch, take, rng);
          std::span<const std::uint32_t> msg(scratch.data(), take);
          LinkSet& dst = next_[u];
          if (dst.freq_enabled()) {
            for (std::uint32_t id : msg) dst.add_arrival(id);
          } else {
            for (std::uint32_t id : msg) dst.insert(id);
          }
          if (group_counter_)
            bytes += 4 * (group_counter_->count(msg, registry_) + msg.size());
        }
      }
    }
    // alpha == 0: empty messages, views unchanged.

    views_.swap(next_);
    return bytes;
  }

  void diff_into_new_set(std::uint32_t u) {
    LinkSet fresh(next_[u].capacity());
    auto prev = views_[u].words();
    auto now = next_[u].words();
    for (std::size_t i = 0; i < now.size(); ++i) {
      std::uint64_t diff = now[i] & ~prev[i];
      while (diff) {
        fresh.insert(static_cast<std::uint32_t>((i << 6) + std::countr_zero(diff)));
        diff &= diff - 1;
      }
    }
    new_sets_[u] = std::move(fresh);
  }

  // Second stage of two-round initialization: fake targets come from node ids
  // observed in round-1 traffic, uniform non-neighbors fill any shortfall.
  void stage2_fakes() {
    const std::uint32_t n = g_.node_count();
    std::vector<std::uint8_t> mentioned(n, 0);
    BudgetRounder rounder;
    for (std::uint32_t u = 0; u < n; ++u) {
      std::uint64_t want =
          rounder.next((1.0 - cfg_.gamma) * cfg_.beta * g_.degree(u));
      if (want == 0) continue;
      std::uint64_t taken = g_.degree(u) + fake_incident_[u];
      if (want + taken > n - 1)
        throw std::invalid_argument("node " + std::to_string(u) +
                                    " lacks enough non-neighbors for beta=" +
                                    std::to_string(cfg_.beta));

      std::fill(mentioned.begin(), mentioned.end(), 0);
      views_[u].for_each([&](std::uint32_t id) {
        const Link& l = registry_.link(id);
        mentioned[l.a] = 1;
        mentioned[l.b] = 1;
      });
      mentioned[u] = 0;
      for (std::uint32_t v : g_.neighbors(u)) mentioned[v] = 0;
      std::vector<std::uint32_t> candidates;
      for (std::uint32_t w = 0; w < n; ++w)
        if (mentioned[w]) candidates.push_back(w);

      SplitMix64 rng = derive_stream(cfg_.seed, stream::kInitFakesStage2, u);
      partial_shuffle(candidates, candidates.size(), rng);
      std::uint64_t made = 0;
      for (std::uint32_t w : candidates) {
        if (made == want) break;
        if (registry_.contains(u, w)) continue;
        add_stage2_fake(u, w);
        ++made;
      }
      if (made < want) {
        fallback_fakes_ += want - made;
        std::cerr << "warning: node " << u << " fell back to uniform targets for "
                  << (want - made) << " fake link(s)\n";
        while (made < want) {
          auto w = static_cast<std::uint32_t>(rng.below(n));
          if (w == u || g_.has_edge(u, w)) continue;
          if (registry_.contains(u, w)) continue;
          add_stage2_fake(u, w);
          ++made;
        }
      }
    }
    for (std::uint32_t u = 0; u < n; ++u) views_[u].resize(registry_.size());
    for (std::uint32_t id : stage2_ids_) {
      std::uint32_t origin = registry_.link(id).origin;
      views_[origin].insert(id);
      if (!src_words_.empty()) mark_source(origin, id);
    }
    stage2_ids_.clear();
  }

  void add_stage2_fake(std::uint32_t u, std::uint32_t w) {
    std::uint32_t id = registry_.add_fake(std::min(u, w), std::max(u, w), u);
    stage2_ids_.push_back(id);
    ++fake_incident_[u];
    ++fake_incident_[w];
  }

  void record_round(std::uint32_t t, std::uint64_t bytes, std::uint64_t ms) {
    const std::uint32_t n = g_.node_count();
    RoundMetrics row;
    row.round = t;
    std::vector<std::uint32_t>& sizes = result_.volumes.emplace_back(n, 0);
    std::uint64_t true_total = 0, total = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
      sizes[u] = views_[u].count();
      total += sizes[u];
      true_total += views_[u].count_below(registry_.true_count());
    }
    row.true_links_total = true_total;
    row.fake_links_total = total - true_total;
    double denom = static_cast<double>(n) *
                   static_cast<double>(g_.edge_count()) * (1.0 + 2.0 * cfg_.beta);
    row.normalized_volume = denom > 0 ? static_cast<double>(total) / denom : 0.0;
    row.ratio = row.fake_links_total == 0
                    ? std::numeric_limits<double>::infinity()
                    : static_cast<double>(true_total) /
                          static_cast<double>(row.fake_links_total);
    row.bytes_baseline = bytes;
    row.wall_time_ms = ms;
    result_.rounds.push_back(row);
  }

  void snapshot(std::uint32_t t) {
    if (cfg_.snapshot_nodes.empty()) return;
    std::vector<LinkSet>& snap = result_.snapshots[t];
    snap.reserve(cfg_.snapshot_nodes.size());
    for (std::uint32_t u : cfg_.snapshot_nodes) snap.push_back(views_.at(u));
  }

  BaselineResult finalize() {
    const std::uint32_t n = g_.node_count();
    result_.nodes.resize(n);
    for (std::uint32_t id = 0; id < registry_.true_count(); ++id) {
      const Link& l = registry_.link(id);
      result_.nodes[l.a].known_true.push_back(id);
      result_.nodes[l.b].known_true.push_back(id);
    }
    for (std::uint32_t id = registry_.true_count(); id < registry_.size(); ++id)
      result_.nodes[registry_.link(id).origin].own_fakes.push_back(id);
    for (std::uint32_t u = 0; u < n; ++u) {
      result_.nodes[u].view = std::move(views_[u]);
      if (cfg_.incremental) result_.nodes[u].new_since_last = std::move(new_sets_[u]);
    }
    result_.registry = std::move(registry_);
    result_.rounds_executed = rounds_total_;
    return std::move(result_);
  }

  const Graph& g_;
  ProtocolConfig cfg_;
  LinkRegistry registry_;
  std::vector<LinkSet> views_, next_, new_sets_;
  std::vector<bool> tracked_;
  std::vector<std::vector<std::uint64_t>> src_words_;
  std::vector<std::uint64_t> src_count_;
  std::vector<std::uint32_t> fake_incident_;
  std::vector<std::uint32_t> stage2_ids_;
  std::optional<GroupCounter> group_counter_;
  std::uint64_t fallback_fakes_ = 0;
  std::uint32_t rounds_total_ = 0;
  BaselineResult result_;
};

}  // namespace

std::uint32_t resolve_rounds(const Graph& g, const ProtocolConfig& cfg) {
  if (cfg.rounds > 0) return cfg.rounds;
  std::uint32_t d = diameter(g);
  return std::max<std::uint32_t>(d, 1);
}

BaselineResult run_baseline(const Graph& g, const ProtocolConfig& cfg) {
  return Engine(g, cfg).run();
}

TwoRoundInit two_round_init(const Graph& g, const ProtocolConfig& cfg) {
  ProtocolConfig one = cfg;
  one.rounds = 1;
  one.track_freq = false;
  one.snapshot_nodes.clear();
  Engine engine(g, one);
  BaselineResult r = engine.run();
  TwoRoundInit out;
  out.registry = std::move(r.registry);
  out.views.reserve(r.nodes.size());
  for (NodeState& ns : r.nodes) out.views.push_back(std::move(ns.view));
  out.fallback_fakes = engine.fallback_fakes();
  return out;
}

std::uint64_t account_bytes_baseline(std::span<const std::uint32_t> ids,
                                     const LinkRegistry& reg) {
  if (ids.empty()) return 0;
  std::vector<std::uint32_t> sources;
  sources.reserve(ids.size());
  for (std::uint32_t id : ids) sources.push_back(reg.link(id).a);
  std::sort(sources.begin(), sources.end());
  std::uint64_t groups =
      std::unique(sources.begin(), sources.end()) - sources.begin();
  return 4 * (groups + ids.size());
}

std::uint64_t account_bytes_recovery(std::uint64_t n_nodes,
                                     std::uint64_t candidate_count) {
  return 4 * n_nodes * candidate_count;
}

}  // namespace linkex
