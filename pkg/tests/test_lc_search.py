import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holocode.graph_code import partition
from holocode.graphification import GraphState
from holocode.lc_search import (
    apply_local,
    default_cost,
    explore_orbit,
    hadamard_sweep,
    lc_equivalent,
    local_complement,
    minimize,
)
from holocode.oracle import from_stabilizer, reduced_entropy, run
from holocode.symplectic import same_group

from .conftest import golden_graph


def _edges(g):
    return {frozenset(e) for e in g.edges()}


def _random_graph(n, rng, p=0.5):
    return GraphState.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def _brute_orbit(g):
    """Independent orbit enumeration on edge sets."""
    start = frozenset(frozenset(e) for e in g.edges())
    seen = {start}
    todo = [start]
    while todo:
        es = todo.pop()
        for v in range(g.n):
            hood = sorted({u for e in es if v in e for u in e if u != v})
            new = set(es)
            for a, b in itertools.combinations(hood, 2):
                new ^= {frozenset((a, b))}
            new = frozenset(new)
            if new not in seen:
                seen.add(new)
                todo.append(new)
    return seen


def _oracle_maps(g1, g2, circuit):
    out = run(circuit, from_stabilizer(g1.check_matrix(), list(g1.names)))
    return out.equal_up_to_phase(from_stabilizer(g2.check_matrix(), list(g2.names)))


def test_triangle_to_path():
    tri = GraphState.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    path, circ = local_complement(tri, 0)
    assert _edges(path) == {frozenset((0, 1)), frozenset((0, 2))}
    assert _oracle_maps(tri, path, circ)


def test_star_to_complete():
    star = GraphState.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    k4, _ = local_complement(star, 0)
    assert k4.num_edges == 6


def test_involution():
    g = _random_graph(7, np.random.default_rng(1))
    for v in range(7):
        once, _ = local_complement(g, v)
        twice, _ = local_complement(once, v)
        assert twice.same_graph(g)


def test_k2_orbit():
    k2 = GraphState.from_edges(2, [(0, 1)])
    orbit = explore_orbit(k2)
    assert len(orbit) == 1 and not orbit.truncated


def test_triangle_and_star_share_orbit():
    tri = GraphState.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    star = GraphState.from_edges(3, [(0, 1), (0, 2)])
    assert explore_orbit(tri).contains(star)
    circ, _ = lc_equivalent(tri, star)
    assert _oracle_maps(tri, star, circ)


def test_lc_equivalent_identity():
    g = _random_graph(5, np.random.default_rng(2))
    circ, cliffs = lc_equivalent(g, g)
    assert all(c.is_identity() for c in cliffs)
    assert len(circ) == 0


def test_inequivalent_pair():
    pair = GraphState.from_edges(3, [(0, 1)])
    tri = GraphState.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    assert lc_equivalent(pair, tri) is None
    # the oracle agrees: vertex 2 is unentangled in one, entangled in the other
    s1 = reduced_entropy(from_stabilizer(pair.check_matrix()), [2])
    s2 = reduced_entropy(from_stabilizer(tri.check_matrix()), [2])
    assert s1 != s2


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_witness_oracle(n, seed):
    rng = np.random.default_rng(seed)
    g = _random_graph(n, rng)
    h = g
    for _ in range(rng.integers(1, 6)):
        h, _ = local_complement(h, int(rng.integers(n)))
    found = lc_equivalent(g, h)
    assert found is not None
    circ, cliffs = found
    assert same_group(apply_local(g, cliffs), h.check_matrix())
    assert _oracle_maps(g, h, circ)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1), st.data())
def test_lc_preserves_entropies(n, seed, data):
    g = _random_graph(n, np.random.default_rng(seed))
    v = data.draw(st.integers(0, n - 1))
    h, _ = local_complement(g, v)
    sg = from_stabilizer(g.check_matrix())
    sh = from_stabilizer(h.check_matrix())
    for size in range(1, n):
        for sub in itertools.combinations(range(n), size):
            assert abs(reduced_entropy(sg, sub) - reduced_entropy(sh, sub)) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_orbit_matches_brute_force_and_is_closed(seed):
    g = _random_graph(6, np.random.default_rng(seed))
    orbit = explore_orbit(g)
    assert not orbit.truncated
    mine = {frozenset(frozenset(e) for e in m.graph.edges()) for m in orbit}
    assert mine == _brute_orbit(g)
    for m in orbit:
        assert same_group(apply_local(g, m.cliffords()), m.graph.check_matrix())
        for v in range(6):
            assert orbit.contains(local_complement(m.graph, v)[0])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_minimize_random_six(seed):
    g = _random_graph(6, np.random.default_rng(seed))
    res = minimize(g)
    best = min(len(es) for es in _brute_orbit(g))
    assert default_cost(res.graph) <= default_cost(g)
    assert res.graph.num_edges == best
    assert _oracle_maps(g, res.graph, res.witness)


def test_minimal_graph_returns_itself():
    path = GraphState.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    res = minimize(path)
    assert res.graph.same_graph(path)
    assert all(c.is_identity() for c in res.cliffords)


def test_truncation_flag():
    g = _random_graph(8, np.random.default_rng(5), p=0.6)
    orbit = explore_orbit(g, budget=3)
    assert orbit.truncated and len(orbit) == 3
    with pytest.raises(ValueError):
        explore_orbit(g, budget=0)


def test_sweep_contains_hadamard_images(golden):
    # the empty subset maps the graph to itself
    found = hadamard_sweep(golden)
    assert golden.nbrs in found
    assert found[golden.nbrs] == 0
    assert len(found) > 1


def test_permutation_must_preserve_roles(golden):
    perm = list(range(golden.n))
    perm[0], perm[5] = perm[5], perm[0]
    with pytest.raises(ValueError):
        minimize(golden, budget=10, permutations=[perm], sweep=False)
