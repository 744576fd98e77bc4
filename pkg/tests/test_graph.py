import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svdyn.errors import InputError
from svdyn.graph import (Graph, GraphHom, check_hom, compose, identity, image,
                         periodic_discriminant, preimage, tuple_discriminant)
from svdyn.sofic import words, golden_mean

from conftest import all_total_graphs, brute_walks, random_total_graph, subsets, total_graphs

AB = Graph(["a", "b"], [(0, 0), (0, 1), (1, 0)])
LOOP = Graph(["a"], [(0, 0)])
CYCLE2 = Graph(["a", "b"], [(0, 1), (1, 0)])


def test_image_examples():
    assert image(AB, "a") == {0, 1}
    assert image(LOOP, "a") == {0}


def test_image_unknown_vertex():
    with pytest.raises(InputError):
        image(AB, "z")
    with pytest.raises(InputError):
        image(AB, 5)


def test_preimage_examples():
    assert preimage(CYCLE2, {1}) == {0}
    assert preimage(AB, set()) == frozenset()
    assert preimage(AB, {0}) == {0, 1}


def test_preimage_rejects_foreign_vertices():
    with pytest.raises(InputError):
        preimage(AB, {7})


def test_rejects_non_total_and_bad_endpoints():
    with pytest.raises(InputError, match="not total"):
        Graph(2, [(0, 1)])
    with pytest.raises(InputError):
        Graph(2, [(0, 2), (1, 0)])
    with pytest.raises(InputError):
        Graph(0, [])


def test_json_round_trip_and_dot():
    g = Graph.from_json(AB.to_json())
    assert g == AB
    dot = AB.to_dot()
    assert dot.startswith("digraph {") and dot.rstrip().endswith("}")
    assert dot.count("->") == 3
    assert LOOP.to_dot().count("0 -> 0;") == 1


@settings(max_examples=150, deadline=None)
@given(total_graphs(max_vertices=8), st.data())
def test_galois_connection(g, data):
    A = data.draw(st.frozensets(st.sampled_from(range(len(g)))))
    pre = preimage(g, A)
    for u in g.vertices:
        assert (u in pre) == bool(image(g, u) & A)


@settings(max_examples=100, deadline=None)
@given(total_graphs(), st.data())
def test_preimage_monotone(g, data):
    verts = st.sampled_from(range(len(g)))
    A = data.draw(st.frozensets(verts))
    B = A | data.draw(st.frozensets(verts))
    assert preimage(g, A) <= preimage(g, B)


def test_check_hom_collapse_to_loop():
    h = GraphHom(CYCLE2, LOOP, ("a", "a"))
    flags = check_hom(h)
    assert flags.homomorphism and flags.edge_surjective and flags.plus_directional and flags.cover


def test_check_hom_not_plus_directional():
    src = Graph(["a", "b", "c"], [(0, 1), (0, 2), (1, 1), (2, 2)])
    tgt = Graph(["x", "y", "z"], [(0, 1), (0, 2), (1, 1), (2, 2)])
    flags = check_hom(GraphHom(src, tgt, (0, 1, 2)))
    assert flags.homomorphism and not flags.plus_directional and not flags.cover


def test_check_hom_golden_mean_blocks():
    one = golden_mean().graph
    blocks = sorted(words(golden_mean(), 2))
    idx = {w: i for i, w in enumerate(blocks)}
    two = Graph(["".join(w) for w in blocks],
                [(idx[w[:2]], idx[w[1:]]) for w in words(golden_mean(), 3)])
    h = GraphHom(two, one, tuple(w[0] for w in blocks))
    flags = check_hom(h)
    assert flags.homomorphism and flags.edge_surjective


def test_check_hom_detects_non_homomorphism():
    flags = check_hom(GraphHom(AB, CYCLE2, (0, 1)))
    assert not flags.homomorphism and not flags.cover


def test_hom_map_validation():
    with pytest.raises(InputError):
        GraphHom(AB, LOOP, ("a",))
    with pytest.raises(InputError):
        GraphHom(AB, LOOP, ("a", "q"))


def test_compose_laws():
    h = GraphHom(CYCLE2, LOOP, (0, 0))
    assert compose(identity(LOOP), h) == h
    assert compose(h, identity(CYCLE2)) == h
    three = Graph(3, [(0, 1), (1, 2), (2, 0)])
    mid = Graph(["p", "q"], [(0, 1), (1, 0), (0, 0)])
    h1 = GraphHom(mid, LOOP, (0, 0))
    h2 = GraphHom(three, mid, ("p", "q", "p"))
    assert compose(h1, h2).map == (0, 0, 0)
    with pytest.raises(InputError):
        compose(h2, h1)


@settings(max_examples=100, deadline=None)
@given(total_graphs(max_vertices=5), st.data())
def test_homomorphism_maps_walks_to_walks(g, data):
    tgt = data.draw(total_graphs(max_vertices=4))
    m = tuple(data.draw(st.integers(0, len(tgt) - 1)) for _ in g.vertices)
    h = GraphHom(g, tgt, m)
    if not check_hom(h).homomorphism:
        return
    for w in brute_walks(g, 4):
        for a, b in zip(w, w[1:]):
            assert (m[a], m[b]) in tgt.edges


def test_tuple_discriminant_examples():
    assert tuple_discriminant(CYCLE2, [{0}, {1}, {0}]) == {0}
    assert tuple_discriminant(CYCLE2, [{0}, {0}]) == frozenset()
    with pytest.raises(InputError):
        tuple_discriminant(CYCLE2, [])


def _brute_discriminant(g, pattern):
    return {w[0] for w in brute_walks(g, len(pattern))
            if all(v in A for v, A in zip(w, pattern))}


def test_tuple_discriminant_exhaustive_small():
    rng = random.Random(3)
    for g in all_total_graphs(3):
        sets = list(subsets(3))
        for _ in range(6):
            pattern = [rng.choice(sets) for _ in range(rng.randint(1, 4))]
            assert tuple_discriminant(g, pattern) == _brute_discriminant(g, pattern)


@settings(max_examples=200, deadline=None)
@given(total_graphs(max_vertices=6), st.data())
def test_tuple_discriminant_matches_walks(g, data):
    verts = st.frozensets(st.sampled_from(range(len(g))))
    pattern = data.draw(st.lists(verts, min_size=1, max_size=6))
    assert tuple_discriminant(g, pattern) == _brute_discriminant(g, pattern)


@settings(max_examples=50, deadline=None)
@given(total_graphs(max_vertices=6), st.integers(1, 6))
def test_all_vertex_pattern_is_free(g, n):
    assert tuple_discriminant(g, [g.all] * n) == g.all


def test_periodic_discriminant_examples():
    assert periodic_discriminant(LOOP, [], [{0}]) == {0}
    assert periodic_discriminant(CYCLE2, [], [{0}, {0}]) == frozenset()
    assert periodic_discriminant(CYCLE2, [{1}], [{0}, {1}]) == {1}
    with pytest.raises(InputError):
        periodic_discriminant(LOOP, [], [])


def _unrolled(g, preamble, cycle):
    # forward pass over (start, current) pairs along the unrolled pattern
    depth = len(g) * len(cycle) + len(preamble) + len(cycle)
    pattern = list(preamble) + [cycle[i % len(cycle)] for i in range(depth)]
    pairs = {(v, v) for v in pattern[0]}
    for A in pattern[1:]:
        pairs = {(s, v) for s, u in pairs for v in g.succ[u] if v in A}
    return {s for s, _ in pairs}


def test_periodic_discriminant_bounded_unrolling():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 5)
        g = random_total_graph(rng, n)
        sets = list(subsets(n))
        pre = [rng.choice(sets) for _ in range(rng.randint(0, 2))]
        cyc = [rng.choice(sets) for _ in range(rng.randint(1, 3))]
        assert periodic_discriminant(g, pre, cyc) == _unrolled(g, pre, cyc)
