"""Path enumeration tests with an independent permutation-based oracle."""

from __future__ import annotations

import math
from itertools import permutations

import pytest

from edge_embed import (
    Link,
    PathCatalog,
    PathExplosionError,
    SamePairError,
    Server,
    build_catalog,
    enumerate_simple_paths,
    make_network,
    path_coefficient,
    resolve_path_cap,
    validate_network,
)
from edge_embed.pathfind import DEFAULT_PATH_CAP, PATH_CAP_ENV_VAR

from conftest import complete_network, triangle_network


# ---------------------------------------------------------------------------
# independent oracle: try every ordering of every intermediate subset
# ---------------------------------------------------------------------------


def oracle_simple_paths(net, src: int, dst: int) -> set[tuple[int, ...]]:
    """All simple src->dst node sequences, found by brute permutation."""
    pair_ok = set()
    for link in net.links:
        pair_ok.add((link.u, link.v))
        pair_ok.add((link.v, link.u))
    others = [n for n in range(net.n_servers) if n not in (src, dst)]
    found = set()
    for r in range(len(others) + 1):
        for mid in permutations(others, r):
            nodes = (src, *mid, dst)
            if all(p in pair_ok for p in zip(nodes, nodes[1:])):
                found.add(nodes)
    return found


def oracle_complete_count(n: int) -> int:
    """Paths between a fixed pair of K_n: sum over r of P(n-2, r)."""
    return sum(math.perm(n - 2, r) for r in range(n - 1))


# ---------------------------------------------------------------------------
# enumeration correctness
# ---------------------------------------------------------------------------


def test_triangle_paths_match_oracle_and_order():
    net = triangle_network()
    paths = enumerate_simple_paths(net, 0, 1)
    assert [p.nodes for p in paths] == [(0, 1), (0, 2, 1)]
    assert {p.nodes for p in paths} == oracle_simple_paths(net, 0, 1)
    # link ids line up with consecutive node hops
    assert paths[0].link_ids == (0,)
    assert paths[1].link_ids == (2, 1)


def test_enumeration_matches_oracle_on_irregular_network():
    # a 5-server network that is neither a tree nor complete
    net = make_network(
        [Server(i, 1.0) for i in range(5)],
        [
            Link(0, 0, 1, 1.0),
            Link(1, 0, 2, 1.0),
            Link(2, 1, 2, 1.0),
            Link(3, 1, 3, 1.0),
            Link(4, 2, 4, 1.0),
            Link(5, 3, 4, 1.0),
        ],
    )
    validate_network(net)
    for src in range(5):
        for dst in range(5):
            if src == dst:
                continue
            got = [p.nodes for p in enumerate_simple_paths(net, src, dst)]
            assert set(got) == oracle_simple_paths(net, src, dst)
            assert len(got) == len(set(got))
            # canonical order: shorter first, then lexicographic
            assert got == sorted(got, key=lambda ns: (len(ns), ns))


@pytest.mark.parametrize(
    "n,expected",
    [(2, 1), (3, 2), (4, 5), (5, 16), (6, 65), (7, 326)],
)
def test_complete_network_pair_counts(n, expected):
    assert oracle_complete_count(n) == expected  # cross-check the constant
    net = complete_network(n)
    paths = enumerate_simple_paths(net, 0, 1)
    assert len(paths) == expected
    assert {p.nodes for p in paths} == oracle_simple_paths(net, 0, 1)


def test_path_reversal_bijection():
    # reversing every 0->1 path yields exactly the 1->0 paths
    net = complete_network(5)
    fwd = {tuple(reversed(p.nodes)) for p in enumerate_simple_paths(net, 0, 1)}
    bwd = {p.nodes for p in enumerate_simple_paths(net, 1, 0)}
    assert fwd == bwd


def test_same_pair_is_rejected():
    net = triangle_network()
    with pytest.raises(SamePairError):
        enumerate_simple_paths(net, 1, 1)


# ---------------------------------------------------------------------------
# coefficients and transit
# ---------------------------------------------------------------------------


def test_path_coefficient_sums_inverse_throughputs():
    net = make_network(
        [Server(0, 1.0), Server(1, 1.0), Server(2, 1.0)],
        [Link(0, 0, 1, 2.0e7), Link(1, 1, 2, 4.0e7)],
    )
    validate_network(net)
    (path,) = enumerate_simple_paths(net, 0, 2)
    assert path_coefficient(path, net) == 7.5e-8  # 1/2e7 + 1/4e7, exact in floats


def test_catalog_transit_aggregates_parallel_paths():
    net = triangle_network()
    catalog = build_catalog(net)
    # pair (0, 1): direct coeff 1.0, detour coeff 1/4 + 1/2 = 0.75
    assert catalog.pair_coefficients(0, 1) == (1.0, 0.75)
    inv_sum = 1 / 1.0 + 1 / 0.75
    assert catalog.transit_seconds(0, 1, 7.0) == pytest.approx(7.0 / inv_sum, rel=1e-12)
    assert catalog.transit_seconds(1, 0, 7.0) == pytest.approx(7.0 / inv_sum, rel=1e-12)
    assert catalog.transit_seconds(2, 2, 123.0) == 0.0


def test_catalog_covers_all_ordered_pairs():
    net = complete_network(4, throughput=3.0)
    catalog = build_catalog(net)
    assert catalog.total_paths == 12 * 5  # 12 ordered pairs, 5 paths each
    for u in range(4):
        for v in range(4):
            if u != v:
                assert len(catalog.pair_paths(u, v)) == 5


# ---------------------------------------------------------------------------
# recursion effort and the explosion guard
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,calls,budget", [(2, 2, 6), (3, 4, 6), (4, 10, 12), (5, 32, 36), (6, 130, 144), (7, 652, 720)])
def test_recursion_calls_within_factorial_budget(n, calls, budget):
    net = complete_network(n)
    catalog = build_catalog(net)
    assert budget == 6 * math.factorial(n - 2)
    assert calls <= budget
    # the DFS call count is identical for every ordered pair of K_n
    assert len(catalog.recursion_calls) == n * (n - 1)
    for pair_calls in catalog.recursion_calls.values():
        assert pair_calls == calls


def test_path_cap_triggers_explosion_error():
    net = complete_network(5)
    with pytest.raises(PathExplosionError) as exc:
        build_catalog(net, path_cap=10)
    assert exc.value.cap == 10


def test_path_cap_aborts_early_on_large_network():
    # K_10 holds 109601 paths per ordered pair; a tiny cap must abort fast
    net = complete_network(10)
    with pytest.raises(PathExplosionError):
        build_catalog(net, path_cap=1000)


def test_resolve_path_cap_precedence(monkeypatch):
    monkeypatch.delenv(PATH_CAP_ENV_VAR, raising=False)
    assert resolve_path_cap(None) == DEFAULT_PATH_CAP
    monkeypatch.setenv(PATH_CAP_ENV_VAR, "250")
    assert resolve_path_cap(None) == 250
    assert resolve_path_cap(7) == 7  # explicit argument wins over environment


def test_catalog_is_deterministic():
    net = complete_network(5, throughput=2.0)
    a = build_catalog(net)
    b = build_catalog(net)
    assert a.total_paths == b.total_paths
    for u in range(5):
        for v in range(5):
            if u != v:
                assert [p.nodes for p in a.pair_paths(u, v)] == [
                    p.nodes for p in b.pair_paths(u, v)
                ]
                assert a.pair_coefficients(u, v) == b.pair_coefficients(u, v)
