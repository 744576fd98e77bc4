"""Finite directed graphs read as set-valued maps of finite type.

A graph ``G = (V, E)`` defines ``F(u) = E(u)``, the out-neighbourhood of
``u``.  Vertices are dense integers ``0..n-1`` with optional display
names; vertex sets are plain ``frozenset`` objects of indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError


VertexSet = frozenset


class Graph:
    """Immutable finite directed graph with every vertex having a successor.

    Parameters
    ----------
    vertices : int or sequence of str
        Either the vertex count or the list of vertex names.
    edges : iterable of (int, int)
        Edge relation as index pairs.
    """

    __slots__ = ("names", "succ", "pred", "edges", "_index")

    def __init__(self, vertices, edges: Iterable[tuple[int, int]]):
        if isinstance(vertices, int):
            names = tuple(str(i) for i in range(vertices))
        else:
            names = tuple(str(v) for v in vertices)
        if len(set(names)) != len(names):
            raise InputError("duplicate vertex names")
        n = len(names)
        if n == 0:
            raise InputError("graph has no vertices")
        edge_set = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) uses an undeclared vertex")
            edge_set.add((u, v))
        succ = [[] for _ in range(n)]
        pred = [[] for _ in range(n)]
        for u, v in sorted(edge_set):
            succ[u].append(v)
            pred[v].append(u)
        dead = [names[u] for u in range(n) if not succ[u]]
        if dead:
            raise InputError(f"graph is not total: no successor for {', '.join(dead)}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "succ", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "pred", tuple(tuple(p) for p in pred))
        object.__setattr__(self, "edges", frozenset(edge_set))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.names == other.names and self.edges == other.edges

    def __hash__(self):
        return hash((self.names, self.edges))

    def __repr__(self):
        return f"Graph(n={len(self)}, edges={len(self.edges)})"

    @property
    def vertices(self) -> range:
        return range(len(self.names))

    @property
    def all(self) -> VertexSet:
        return frozenset(self.vertices)

    def index(self, v) -> int:
        """Resolve a vertex given by index or by name."""
        if isinstance(v, int) and not isinstance(v, bool):
            if 0 <= v < len(self.names):
                return v
            raise InputError(f"unknown vertex {v}")
        try:
            return self._index[str(v)]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def vertex_set(self, items: Iterable) -> VertexSet:
        return frozenset(self.index(v) for v in items)

    def _check_subset(self, A) -> VertexSet:
        A = frozenset(A)
        n = len(self.names)
        for v in A:
            if not (isinstance(v, int) and 0 <= v < n):
                raise InputError(f"vertex set is not a subset of the graph's vertices: {v!r}")
        return A

    def image(self, u) -> VertexSet:
        return frozenset(self.succ[self.index(u)])

    def preimage(self, A) -> VertexSet:
        A = self._check_subset(A)
        return frozenset(u for v in A for u in self.pred[v])

    def to_json(self) -> dict:
        return {"vertices": list(self.names), "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        try:
            return cls(data["vertices"], data["edges"])
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"malformed graph JSON: {exc}") from None

    def to_dot(self) -> str:
        lines = ["digraph {"]
        for i, name in enumerate(self.names):
            lines.append(f'  {i} [label="{_dot_escape(name)}"];')
        for u, v in sorted(self.edges):
            lines.append(f"  {u} -> {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def image(g: Graph, u) -> VertexSet:
    return g.image(u)


def preimage(g: Graph, A) -> VertexSet:
    return g.preimage(A)


@dataclass(frozen=True)
class GraphHom:
    """Vertex map ``source -> target``; edge preservation is checked separately."""

    source: Graph
    target: Graph
    map: tuple

    def __post_init__(self):
        m = tuple(self.map)
        if len(m) != len(self.source):
            raise InputError(
                f"vertex map has {len(m)} entries, source has {len(self.source)} vertices")
        m = tuple(self.target.index(v) for v in m)
        object.__setattr__(self, "map", m)

    def __call__(self, u: int) -> int:
        return self.map[u]

    def image_of(self, A) -> VertexSet:
        return frozenset(self.map[u] for u in A)


@dataclass(frozen=True)
class HomCheck:
    homomorphism: bool
    edge_surjective: bool
    plus_directional: bool
    cover: bool

    def to_json(self):
        return {"homomorphism": self.homomorphism, "edge_surjective": self.edge_surjective,
                "plus_directional": self.plus_directional, "cover": self.cover}


def check_hom(h: GraphHom) -> HomCheck:
    m = h.map
    mapped = {(m[u], m[v]) for u, v in h.source.edges}
    hom = mapped <= h.target.edges
    surj = mapped == h.target.edges
    plus = all(len({m[v] for v in h.source.succ[u]}) <= 1 for u in h.source.vertices)
    return HomCheck(hom, surj, plus, hom and surj and plus)


def identity(g: Graph) -> GraphHom:
    return GraphHom(g, g, tuple(g.vertices))


def compose(h1: GraphHom, h2: GraphHom) -> GraphHom:
    """Return ``h1 o h2`` (apply ``h2`` first)."""
    if h2.target != h1.source:
        raise InputError("cannot compose: target of the inner map is not the source of the outer")
    return GraphHom(h2.source, h1.target, tuple(h1.map[v] for v in h2.map))


def _as_sets(g: Graph, pattern) -> list[VertexSet]:
    return [g._check_subset(A) for A in pattern]


def tuple_discriminant(g: Graph, pattern: Sequence) -> VertexSet:
    """Start vertices of walks ``v_0 ... v_n`` with ``v_i`` in ``pattern[i]``."""
    sets = _as_sets(g, pattern)
    if not sets:
        raise InputError("pattern must be nonempty")
    S = sets[-1]
    for A in reversed(sets[:-1]):
        S = A & g.preimage(S)
    return S


def periodic_discriminant(g: Graph, preamble: Sequence, cycle: Sequence) -> VertexSet:
    """Start vertices of infinite walks following ``preamble`` then ``cycle`` forever.

    Greatest fixed point of the backward operator taken once around the cycle.
    """
    cyc = _as_sets(g, cycle)
    if not cyc:
        raise InputError("cycle must be nonempty")
    pre = _as_sets(g, preamble)
    S = cyc[0]
    while True:
        T = S
        for A in reversed(cyc):
            T = A & g.preimage(T)
        T &= S
        if T == S:
            break
        S = T
    for A in reversed(pre):
        S = A & g.preimage(S)
    return S


def forward_core(n: int, succ: Sequence[Sequence[int]]) -> frozenset:
    """Vertices of a (possibly non-total) successor structure with an infinite forward walk."""
    alive = set(range(n))
    outdeg = [len(set(s)) for s in succ]
    pred = [[] for _ in range(n)]
    for u in range(n):
        for v in set(succ[u]):
            pred[v].append(u)
    stack = [u for u in range(n) if outdeg[u] == 0]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in pred[v]:
            if u in alive:
                outdeg[u] -= 1
                if outdeg[u] == 0:
                    stack.append(u)
    return frozenset(alive)


def trimmed(names: Sequence[str], edges: Iterable[tuple[int, int]]):
    """Restrict a successor relation to its forward core and reindex.

    Returns ``(graph, kept)`` where ``kept[i]`` is the original index of
    vertex ``i``; ``graph`` is None when nothing survives.
    """
    n = len(names)
    edges = list(edges)
    succ = [[] for _ in range(n)]
    for u, v in edges:
        succ[u].append(v)
    core = sorted(forward_core(n, succ))
    if not core:
        return None, ()
    new = {old: i for i, old in enumerate(core)}
    g = Graph([names[i] for i in core],
              [(new[u], new[v]) for u, v in edges if u in new and v in new])
    return g, tuple(core)
