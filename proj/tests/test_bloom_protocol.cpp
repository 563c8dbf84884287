#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linkex/bloom_protocol.hpp"
#include "linkex/graph.hpp"

using namespace linkex;

namespace {

std::vector<std::uint32_t> all_nodes(const Graph& g) {
  std::vector<std::uint32_t> out(g.node_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u) out[u] = u;
  return out;
}

}  // namespace

TEST_CASE("single edge graph recovers its one link") {
  Graph g = Graph::from_edges(2, {{0, 1}});
  ProtocolConfig cfg;
  cfg.alpha = 1.0;
  cfg.beta = 0.0;
  cfg.rounds = 1;
  cfg.seed = 5;
  BloomOptions opts;
  BloomResult res = run_bloom(g, cfg, opts);
  REQUIRE(res.registry.size() == 1);
  CHECK(res.recovered[0].count() == 1);
  CHECK(res.recovered[1].count() == 1);
  CHECK(res.recovery_download_bytes == 4ULL * 2 * 1);
}

TEST_CASE("coordinator candidates cover exactly the round-0 union") {
  Graph g = generate_er(50, 140, 3);
  ProtocolConfig cfg;
  cfg.beta = 0.5;
  cfg.seed = 9;
  cfg.rounds = 2;
  BloomOptions opts;
  BloomResult res = run_bloom(g, cfg, opts);
  InitialState init = register_initial_links(g, 0.5, 1.0, 9);
  LinkSet unioned(init.registry.size());
  for (const LinkSet& v : init.views) unioned.union_into(v);
  CHECK(res.coordinator.candidate_ids.size() == unioned.count());
  CHECK(res.coordinator.candidate_ids.size() == res.registry.size());
  double nominal = (1.0 + 2.0 * 0.5) * static_cast<double>(g.edge_count());
  CHECK(std::abs(static_cast<double>(res.registry.size()) - nominal) <=
        static_cast<double>(g.node_count()) / 2.0);
}

TEST_CASE("alpha 1 recovery is a superset of the baseline views") {
  Graph g = generate_er(60, 170, 7);
  ProtocolConfig cfg;
  cfg.alpha = 1.0;
  cfg.beta = 0.5;
  cfg.seed = 21;
  cfg.rounds = 3;
  cfg.snapshot_nodes = all_nodes(g);
  BaselineResult base = run_baseline(g, cfg);
  BloomOptions opts;
  BloomResult bloom = run_bloom(g, cfg, opts);
  REQUIRE(base.registry.size() == bloom.registry.size());
  for (std::uint32_t t = 0; t <= 3; ++t) {
    for (std::uint32_t u = 0; u < g.node_count(); ++u) {
      const LinkSet& exact = base.snapshots.at(t)[u];
      const LinkSet& rec = bloom.snapshots.at(t)[u];
      exact.for_each([&](std::uint32_t id) { CHECK(rec.test(id)); });
    }
  }
}

TEST_CASE("alpha 0 recovery holds the initial view plus rare false positives") {
  Graph g = generate_er(40, 110, 13);
  ProtocolConfig cfg;
  cfg.alpha = 0.0;
  cfg.beta = 0.5;
  cfg.seed = 2;
  cfg.rounds = 3;
  BloomOptions opts;
  opts.fp_rate = 0.1;
  BloomResult res = run_bloom(g, cfg, opts);
  InitialState init = register_initial_links(g, 0.5, 1.0, 2);
  std::uint64_t extras = 0;
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    init.views[u].for_each([&](std::uint32_t id) { CHECK(res.recovered[u].test(id)); });
    extras += res.recovered[u].count() - init.views[u].count();
  }
  // Expected extras ~ p * candidates per node; allow a generous band.
  double expected = 0.1 * static_cast<double>(res.registry.size()) * g.node_count();
  CHECK(static_cast<double>(extras) < 3.0 * expected + 50.0);
}

TEST_CASE("exhaustive recovery equals candidate recovery on the candidate set") {
  Graph g = generate_er(30, 80, 17);
  ProtocolConfig cfg;
  cfg.alpha = 0.75;
  cfg.beta = 0.5;
  cfg.seed = 4;
  cfg.rounds = 3;
  BloomOptions opts;
  opts.fp_rate = 0.01;
  BloomResult res = run_bloom(g, cfg, opts);
  std::uint64_t phantoms = 0;
  double expected_phantoms = 0.0;
  double pair_count = 30.0 * 29.0 / 2.0;
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    auto pairs = recover_exhaustive(res.filters[u], g.node_count());
    LinkSet from_pairs(res.registry.size());
    for (auto [a, b] : pairs) {
      auto id = res.registry.find(a, b);
      if (id)
        from_pairs.insert(*id);
      else
        ++phantoms;
    }
    CHECK(from_pairs == res.recovered[u]);
    // Converged filters hold (1+2b)|E| elements, well past the planned load,
    // so phantoms follow the density estimate (m1/m)^k rather than p.
    double density = static_cast<double>(res.filters[u].ones()) /
                     static_cast<double>(res.plan.m);
    expected_phantoms += std::pow(density, res.plan.k) * pair_count;
  }
  CHECK(static_cast<double>(phantoms) < 2.0 * expected_phantoms + 50.0);
  CHECK(static_cast<double>(phantoms) > 0.25 * expected_phantoms - 10.0);
}

TEST_CASE("recover matches per-link membership queries") {
  Graph g = generate_er(25, 60, 23);
  ProtocolConfig cfg;
  cfg.beta = 1.0;
  cfg.seed = 6;
  cfg.rounds = 2;
  BloomOptions opts;
  BloomResult res = run_bloom(g, cfg, opts);
  for (std::uint32_t u : {0u, 5u, 12u}) {
    LinkSet direct = recover(res.filters[u], res.registry);
    CHECK(direct == res.recovered[u]);
  }
  BloomFilter empty(res.plan.m, res.plan.k, res.filters[0].hash_seed());
  CHECK(recover(empty, res.registry).count() == 0);
}

TEST_CASE("per-round filter payload is constant") {
  Graph g = generate_ba(50, 2, 31);
  ProtocolConfig cfg;
  cfg.alpha = 0.5;
  cfg.beta = 0.5;
  cfg.seed = 12;
  cfg.rounds = 4;
  BloomOptions opts;
  BloomResult res = run_bloom(g, cfg, opts);
  std::uint64_t per_round = 2 * g.edge_count() * ((res.plan.m + 7) / 8);
  for (std::uint32_t t = 1; t <= 4; ++t)
    CHECK(res.rounds[t].bytes_bloom_raw == per_round);
  CHECK(res.rounds[0].bytes_bloom_raw == 0);
}

TEST_CASE("compressed accounting shrinks early sparse rounds") {
  Graph g = generate_er(60, 150, 37);
  ProtocolConfig cfg;
  cfg.alpha = 0.75;
  cfg.beta = 0.5;
  cfg.seed = 3;
  cfg.rounds = 3;
  BloomOptions opts;
  opts.compress_accounting = true;
  BloomResult res = run_bloom(g, cfg, opts);
  CHECK(res.rounds[1].bytes_bloom_compressed > 0);
  CHECK(res.rounds[1].bytes_bloom_compressed < res.rounds[1].bytes_bloom_raw);
  // Later rounds are denser, so they compress worse than round 1.
  CHECK(res.rounds[3].bytes_bloom_compressed >= res.rounds[1].bytes_bloom_compressed);
}

TEST_CASE("erased-exchange ratio converges near the baseline value") {
  for (double alpha : {0.5, 0.75}) {
    Graph g = generate_er(300, 900, 41);
    std::uint32_t diam = compute_metrics(g).diameter;
    ProtocolConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = 0.5;
    cfg.seed = 15;
    cfg.rounds = diam;
    BloomOptions opts;
    BloomResult res = run_bloom(g, cfg, opts);
    double ratio = res.rounds.back().ratio;
    CHECK(std::abs(ratio - 1.0) < 0.1);  // 1/(2*beta) = 1
  }
}

TEST_CASE("bloom run rejects unsupported configurations") {
  Graph g = generate_er(10, 20, 1);
  ProtocolConfig cfg;
  BloomOptions opts;
  cfg.gamma = 0.5;
  CHECK_THROWS_AS(run_bloom(g, cfg, opts), std::invalid_argument);
  cfg.gamma = 1.0;
  cfg.incremental = true;
  CHECK_THROWS_AS(run_bloom(g, cfg, opts), std::invalid_argument);
}
