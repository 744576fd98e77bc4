import itertools
import random

from hypothesis import strategies as st

from svdyn.graph import Graph
from svdyn.sofic import core


def random_total_graph(rng: random.Random, n: int, density: float = 0.35) -> Graph:
    edges = set()
    for u in range(n):
        for v in range(n):
            if rng.random() < density:
                edges.add((u, v))
        if not any(e[0] == u for e in edges):
            edges.add((u, rng.randrange(n)))
    return Graph(n, edges)


@st.composite
def total_graphs(draw, max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    edges = set()
    for u in range(n):
        succ = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
        edges.update((u, v) for v in succ)
    return Graph(n, edges)


def brute_walks(g: Graph, length: int):
    """All walks with ``length`` vertices."""
    walks = [(v,) for v in g.vertices]
    for _ in range(length - 1):
        walks = [w + (v,) for w in walks for v in g.succ[w[-1]]]
    return walks


def all_total_graphs(n: int):
    pairs = [(u, v) for u in range(n) for v in range(n)]
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len({u for u, _ in edges}) == n:
            yield Graph(n, edges)


def subsets(n: int):
    for r in range(n + 1):
        yield from (frozenset(c) for c in itertools.combinations(range(n), r))


def same_words_up_to(a, b, bound):
    """Is ``words(a, n) == words(b, n)`` for every ``n <= bound``?

    Words are extended letter by letter from both presentations at once.
    Two words reaching the same pair of end-vertex sets have the same
    extensions, so one representative per pair is kept; this keeps the
    comparison exact without listing up to 2**bound words.
    """
    ga, la = core(a)
    gb, lb = core(b)
    frontier = {(None, None)}  # before the first letter
    for _ in range(bound):
        nxt = set()
        for A, B in frontier:
            for s in sorted(set(a.alphabet) | set(b.alphabet)):
                A2 = frozenset(v for u in A for v in ga.succ[u] if la[v] == s) \
                    if A is not None else frozenset(v for v in ga.vertices if la[v] == s)
                B2 = frozenset(v for u in B for v in gb.succ[u] if lb[v] == s) \
                    if B is not None else frozenset(v for v in gb.vertices if lb[v] == s)
                if bool(A2) != bool(B2):
                    return False
                if A2:
                    nxt.add((A2, B2))
        frontier = nxt
    return True


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
