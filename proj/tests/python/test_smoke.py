"""Smoke tests for the compiled linkex module."""

import math

import pytest

linkex = pytest.importorskip("linkex")


def test_generators_and_metrics():
    g = linkex.generate_er(100, 300, 1)
    assert g.node_count == 100
    assert g.edge_count == 300
    assert sorted(g.neighbors(0)) == g.neighbors(0)

    ba = linkex.generate_ba(100, 3, 2)
    assert ba.edge_count == 3 + 97 * 3

    tri_path = linkex.bfs_distances(g, 0)
    assert tri_path[0] == 0

    m = linkex.compute_metrics(g)
    assert m.diameter >= 1
    assert math.isclose(sum(m.distance_histogram), 1.0, abs_tol=1e-9)
    assert 0.0 <= m.clustering_coefficient <= 1.0


def test_baseline_convergence():
    g = linkex.generate_er(80, 240, 3)
    cfg = linkex.ProtocolConfig(alpha=1.0, beta=0.0, seed=5)
    res = linkex.run_baseline(g, cfg)
    assert res.fake_link_count == 0
    # All true links at every node by the final round.
    for u in (0, 10, 79):
        assert res.view_size(u) == res.true_link_count

    noisy = linkex.run_baseline(g, linkex.ProtocolConfig(alpha=1.0, beta=0.5, seed=5))
    assert math.isclose(noisy.final_ratio(), 1.0, rel_tol=0.05)
    rounds = noisy.rounds
    assert rounds[0].round == 0
    assert rounds[-1].true_links_total == 80 * noisy.true_link_count


def test_attack_report():
    g = linkex.generate_er(60, 160, 7)
    cfg = linkex.ProtocolConfig(alpha=1.0, beta=0.5, seed=9, track_freq=True)
    res = linkex.run_baseline(g, cfg)
    rep = res.attack_report(5, 0.5, seed=1)
    assert rep.tp + rep.fp == rep.k_threshold
    assert 0.0 <= rep.f1 <= 1.0


def test_bloom_filter_roundtrip():
    plan = linkex.plan_parameters(0.1, 50424)
    assert plan.k == 4
    assert abs(plan.m / 50424 - 5.77) < 0.01

    bf = linkex.BloomFilter(4096, 4, 99)
    bf.insert(3, 9)
    assert bf.query(3, 9)
    assert not bf.query(4, 9)

    erased = bf.erase_bits(0.5, seed=3)
    assert erased.ones <= bf.ones

    data = bf.compress()
    assert linkex.BloomFilter.decompress(data) == bf


def test_bloom_protocol():
    g = linkex.generate_er(50, 140, 11)
    cfg = linkex.ProtocolConfig(alpha=1.0, beta=0.5, seed=13)
    res = linkex.run_bloom(g, cfg, p=0.1)
    assert res.plan.k == 4
    assert res.recovery_download_bytes == 4 * 50 * (res.true_link_count + res.fake_link_count)
    # At alpha=1 every candidate is recovered everywhere by Diam(G).
    total = res.true_link_count + res.fake_link_count
    assert res.recovered_size(0) == total


def test_upper_bound():
    g = linkex.generate_er(30, 70, 17)
    lu0 = linkex.upper_bound_lu(g, 1.0, 0.5, 0)
    assert all(x >= 0 for x in lu0)
    lu2 = linkex.upper_bound_lu(g, 1.0, 0.5, 2)
    assert all(b >= a for a, b in zip(lu0, lu2))
