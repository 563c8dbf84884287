#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "linkex/links.hpp"

using namespace linkex;

TEST_CASE("registry round trip and duplicate rejection") {
  LinkRegistry reg;
  std::uint32_t t0 = reg.add_true(3, 1);
  std::uint32_t f0 = reg.add_fake(5, 2, 2);
  CHECK(t0 == 0);
  CHECK(f0 == 1);
  CHECK(reg.link(t0).a == 1);
  CHECK(reg.link(t0).b == 3);
  CHECK(reg.find(1, 3) == t0);
  CHECK(reg.find(3, 1) == t0);
  CHECK(reg.find(2, 5) == f0);
  CHECK(!reg.find(1, 2).has_value());
  CHECK(reg.true_count() == 1);
  CHECK(reg.fake_count() == 1);
  for (std::uint32_t id = 0; id < reg.size(); ++id)
    CHECK(reg.find(reg.link(id).a, reg.link(id).b) == id);

  CHECK_THROWS_AS(reg.add_true(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(reg.add_fake(2, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(reg.add_fake(4, 6, 9), std::invalid_argument);

  std::stringstream dump;
  reg.dump(dump);
  CHECK(dump.str() == "0 1 3 true -\n1 2 5 fake 2\n");
}

TEST_CASE("initial links: beta budgets and target validity") {
  // Node 0 with neighbors 1 and 2 in a 12-node graph, as in the protocol
  // walkthrough figure; beta=1/3 gives exactly one fake at node 0.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges = {
      {0, 1}, {0, 2}, {1, 3}, {2, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8},
      {8, 9}, {9, 10}, {10, 11}};
  Graph g = Graph::from_edges(12, edges);
  InitialState st = register_initial_links(g, 1.0 / 3.0, 1.0, 77);
  std::uint32_t node0_fakes = 0;
  for (std::uint32_t id = st.registry.true_count(); id < st.registry.size(); ++id) {
    const Link& l = st.registry.link(id);
    CHECK(!g.has_edge(l.a, l.b));
    CHECK(l.a != l.b);
    if (l.origin == 0) {
      ++node0_fakes;
      std::uint32_t target = l.a == 0 ? l.b : l.a;
      CHECK(target != 1);
      CHECK(target != 2);
    }
  }
  CHECK(node0_fakes == 1);
  // Node 0 holds its two true links plus the fake.
  CHECK(st.views[0].count() == 3);
}

TEST_CASE("initial links: zero beta and exact budgets") {
  Graph g = generate_er(60, 150, 3);
  InitialState st = register_initial_links(g, 0.0, 1.0, 1);
  CHECK(st.registry.fake_count() == 0);
  CHECK(st.registry.true_count() == g.edge_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u)
    CHECK(st.views[u].count() == g.degree(u));

  InitialState noisy = register_initial_links(g, 0.5, 1.0, 1);
  // Budgets are error-diffused: each node within one link of beta*d_u, the
  // total within half a link of beta * sum(d).
  double mass = 0.5 * 2.0 * static_cast<double>(g.edge_count());
  CHECK(std::abs(static_cast<double>(noisy.registry.fake_count()) - mass) <= 0.5);
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    double own = static_cast<double>(noisy.views[u].count() - g.degree(u));
    CHECK(std::abs(own - 0.5 * g.degree(u)) <= 1.0);
  }
}

TEST_CASE("initial links: four neighbors at beta 0.5 gives two fakes") {
  // Star with center 0 of degree 4 inside a 10-node graph.
  Graph g = Graph::from_edges(10, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}, {7, 8}});
  InitialState st = register_initial_links(g, 0.5, 1.0, 5);
  std::uint32_t center_fakes = 0;
  for (std::uint32_t id = st.registry.true_count(); id < st.registry.size(); ++id)
    if (st.registry.link(id).origin == 0) ++center_fakes;
  CHECK(center_fakes == 2);
}

TEST_CASE("initial links: infeasible beta names the node") {
  // K4: no non-neighbors at all.
  Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK_THROWS_WITH_AS(register_initial_links(g, 1.0, 1.0, 1),
                       doctest::Contains("node 0"), std::invalid_argument);
}

TEST_CASE("fake links are globally distinct") {
  Graph g = generate_er(30, 60, 21);
  InitialState st = register_initial_links(g, 1.0, 1.0, 4);
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t id = 0; id < st.registry.size(); ++id) {
    const Link& l = st.registry.link(id);
    CHECK(pairs.insert({l.a, l.b}).second);
  }
}

TEST_CASE("union semantics and arrival counting") {
  LinkSet dst(16);
  dst.enable_freq();
  LinkSet src(16);
  src.insert(1);
  src.insert(2);
  dst.union_into(src);
  CHECK(dst.count() == 2);
  CHECK(dst.freq(1) == 1);
  CHECK(dst.freq(2) == 1);

  // Idempotent membership, but every copy counts as an arrival.
  dst.union_into(src);
  dst.union_into(src);
  CHECK(dst.count() == 2);
  CHECK(dst.freq(1) == 3);

  LinkSet self = dst;
  dst.union_into(self);
  CHECK(dst.count() == 2);

  LinkSet plain(16);
  plain.insert(5);
  plain.union_into(src);
  CHECK(plain.count() == 3);
  CHECK(!plain.freq_enabled());
}

TEST_CASE("sample alpha cardinality and containment") {
  LinkSet s(2000);
  for (std::uint32_t id = 0; id < 1000; ++id) s.insert(id * 2);
  SplitMix64 rng(9);

  LinkSet all = sample_alpha(s, 1.0, rng);
  CHECK(all == s);

  LinkSet none = sample_alpha(s, 0.0, rng);
  CHECK(none.count() == 0);

  LinkSet quarter = sample_alpha(s, 0.25, rng);
  CHECK(quarter.count() == 250);
  quarter.for_each([&](std::uint32_t id) { CHECK(s.test(id)); });
}

TEST_CASE("sample alpha inclusion rate is uniform") {
  LinkSet s(1000);
  for (std::uint32_t id = 0; id < 1000; ++id) s.insert(id);
  std::vector<std::uint32_t> hits(1000, 0);
  const int trials = 10000;
  SplitMix64 rng(123);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::uint32_t> ids = sample_ids(s, 0.25, rng);
    CHECK(ids.size() == 250);
    for (std::uint32_t id : ids) ++hits[id];
  }
  for (std::uint32_t id = 0; id < 1000; ++id) {
    double rate = static_cast<double>(hits[id]) / trials;
    CHECK(rate == doctest::Approx(0.25).epsilon(0.08));  // 0.25 +- 0.02
  }
}

TEST_CASE("count below boundary") {
  LinkSet s(200);
  s.insert(0);
  s.insert(63);
  s.insert(64);
  s.insert(130);
  CHECK(s.count_below(64) == 2);
  CHECK(s.count_below(65) == 3);
  CHECK(s.count_below(200) == 4);
  CHECK(s.count_below(0) == 0);
}
