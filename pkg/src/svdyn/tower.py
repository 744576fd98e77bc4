"""Inverse sequences of finite graphs and their stabilization tests.

A :class:`Tower` holds graphs ``G_first, G_first+1, ...`` with bonding
homomorphisms ``G_{m+1} -> G_m``.  Level numbers are absolute: a tower
built from ``k``-blocks starts at level 1 so that level ``k`` is the
``k``-block graph.

Shadowing is tested by projecting the walk shift of each deeper level down
to a fixed level and watching the chain of projected shifts shrink.  On a
finite tower that is only evidence up to the last level, so the report
records the margin over which the chain was seen to be constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import InputError
from .graph import Graph, GraphHom, HomCheck, VertexSet, check_hom, compose, identity
from .sofic import (ForbiddenWordSFT, LabeledAutomaton, WordDFA, allowed_words_dfa,
                    dfa_subset, relabel, sft_automaton, vertex_shift, word_name, words)

DEFAULT_MARGIN = 2


class Tower:
    """Finite inverse sequence of graphs.

    Parameters
    ----------
    levels : sequence of Graph
        ``levels[0]`` is the coarsest graph.
    bonds : sequence of GraphHom or vertex maps
        ``bonds[i]`` maps ``levels[i + 1]`` to ``levels[i]``.
    first_level : int
        Absolute number of ``levels[0]``.
    eventually_constant : bool
        Declare that the sequence continues with identity bonds after the
        last level, which makes stabilization at the last level exact.
    """

    def __init__(self, levels: Sequence[Graph], bonds: Sequence = (), first_level: int = 0,
                 eventually_constant: bool = False):
        levels = tuple(levels)
        if not levels:
            raise InputError("tower needs at least one level")
        if len(bonds) != len(levels) - 1:
            raise InputError(f"{len(levels)} levels need {len(levels) - 1} bonds, got {len(bonds)}")
        homs = []
        for i, b in enumerate(bonds):
            if not isinstance(b, GraphHom):
                b = GraphHom(levels[i + 1], levels[i], tuple(b))
            elif b.source != levels[i + 1] or b.target != levels[i]:
                raise InputError(f"bond {i} does not map level {i + 1} to level {i}")
            flags = check_hom(b)
            if not flags.homomorphism:
                raise InputError(
                    f"bond from level {first_level + i + 1} to {first_level + i} "
                    "is not a graph homomorphism")
            homs.append(b)
        self.levels = levels
        self.bonds = tuple(homs)
        self.first_level = first_level
        self.eventually_constant = eventually_constant
        self.bond_flags: tuple[HomCheck, ...] = tuple(check_hom(b) for b in homs)

    @classmethod
    def single(cls, g: Graph, level: int = 0) -> "Tower":
        """One graph standing for the constant inverse system it generates."""
        return cls([g], [], first_level=level, eventually_constant=True)

    @property
    def last_level(self) -> int:
        return self.first_level + len(self.levels) - 1

    def __len__(self):
        return len(self.levels)

    def level(self, k: int) -> Graph:
        return self.levels[self._offset(k)]

    def _offset(self, k: int) -> int:
        if not (self.first_level <= k <= self.last_level):
            raise InputError(f"level {k} outside {self.first_level}..{self.last_level}")
        return k - self.first_level

    def bond(self, m: int, n: int) -> GraphHom:
        """Composed bonding map from level ``m`` down to level ``n <= m``."""
        if n > m:
            raise InputError(f"no bond from level {m} up to level {n}")
        h = identity(self.level(m))
        for k in range(self._offset(m), self._offset(n), -1):
            h = compose(self.bonds[k - 1], h)
        return h

    def to_json(self) -> dict:
        data = {"levels": [g.to_json() for g in self.levels],
                "bonds": [{"map": list(b.map)} for b in self.bonds]}
        if self.first_level:
            data["first_level"] = self.first_level
        if self.eventually_constant:
            data["eventually_constant"] = True
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Tower":
        try:
            levels = [Graph.from_json(g) for g in data["levels"]]
            bonds = [b["map"] for b in data.get("bonds", [])]
            return cls(levels, bonds, int(data.get("first_level", 0)),
                       bool(data.get("eventually_constant", False)))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed tower JSON: {exc}") from None


def _check_range(t: Tower, n: int, D: int):
    t._offset(n)
    t._offset(D)
    if n > D:
        raise InputError(f"level {n} is deeper than depth {D}")


def _stable_from(chain: Sequence, n: int) -> int:
    """First index from which a chain indexed from ``n`` is constant."""
    m = n + len(chain) - 1
    while m > n and chain[m - n - 1] == chain[m - n]:
        m -= 1
    return m


@dataclass(frozen=True)
class MLReport:
    level: int
    depth: int
    chain: tuple
    witnessed_at: int
    stable_image: VertexSet

    def to_json(self, g: Graph | None = None) -> dict:
        def fmt(A):
            return sorted(g.names[v] for v in A) if g else sorted(A)
        return {"level": self.level, "depth": self.depth,
                "chain": [fmt(A) for A in self.chain],
                "chain_sizes": [len(A) for A in self.chain],
                "witnessed_at": self.witnessed_at, "stable_image": fmt(self.stable_image)}


def vertex_ml(t: Tower, n: int, D: int) -> MLReport:
    """Images of deeper vertex sets at level ``n``, for levels ``n..D``."""
    _check_range(t, n, D)
    chain = []
    h = identity(t.level(n))
    for m in range(n, D + 1):
        if m > n:
            h = compose(h, t.bonds[t._offset(m) - 1])
        chain.append(frozenset(h.map))
    chain = tuple(chain)
    return MLReport(n, D, chain, _stable_from(chain, n), chain[-1])


def orbit_shift_chain(t: Tower, n: int, D: int) -> list[LabeledAutomaton]:
    """Walk shifts of levels ``n..D`` projected letterwise to level ``n``."""
    _check_range(t, n, D)
    return [_project(t, n, m) for m in range(n, D + 1)]


@dataclass(frozen=True)
class ShadowingReport:
    level: int
    depth: int
    margin: int
    chain_summary: tuple  # (m, minimal DFA state count)
    status: str  # "witnessed" | "undetermined"
    witnessed_at: int | None
    last_strict_decrease: int | None
    exact: bool
    chain_monotone: bool
    stabilized_shift: LabeledAutomaton | None = field(default=None, compare=False)

    @property
    def witnessed(self) -> bool:
        return self.status == "witnessed"

    def to_json(self) -> dict:
        return {"level": self.level, "depth": self.depth, "margin": self.margin,
                "chain_summary": [{"m": m, "dfa_states": k} for m, k in self.chain_summary],
                "status": self.status, "witnessed_at": self.witnessed_at,
                "last_strict_decrease": self.last_strict_decrease, "exact": self.exact,
                "chain_monotone": self.chain_monotone}


def shadowing_status(t: Tower, n: int, D: int, margin: int = DEFAULT_MARGIN) -> ShadowingReport:
    """Decide whether the projected orbit shifts at level ``n`` stabilize by depth ``D``.

    The chain counts as witnessed when it is constant from some ``m`` to
    ``D`` with ``D - m >= margin``.  If ``D`` is the last level of an
    eventually constant tower the constant tail is certain and no margin is
    needed.
    """
    if margin < 1:
        raise InputError("margin must be at least 1")
    chain = orbit_shift_chain(t, n, D)
    dfas: list[WordDFA] = [allowed_words_dfa(a) for a in chain]
    monotone = all(dfa_subset(dfas[i + 1], dfas[i]) for i in range(len(dfas) - 1))
    m_star = _stable_from(dfas, n)
    exact = t.eventually_constant and D == t.last_level
    ok = exact or D - m_star >= margin
    return ShadowingReport(
        level=n, depth=D, margin=margin,
        chain_summary=tuple((n + i, len(d)) for i, d in enumerate(dfas)),
        status="witnessed" if ok else "undetermined",
        witnessed_at=m_star if ok else None,
        last_strict_decrease=m_star - 1 if m_star > n else None,
        exact=exact, chain_monotone=monotone,
        stabilized_shift=chain[-1] if ok else None)


def subshift_tower(s: Union[LabeledAutomaton, ForbiddenWordSFT], D: int) -> Tower:
    """Higher-block tower: level ``k`` is the graph of allowed ``k``-blocks.

    Edges are the allowed ``(k+1)``-blocks and each bond drops the last
    letter.  Levels run from 1 to ``D``.
    """
    if D < 1:
        raise InputError("depth must be at least 1")
    a = sft_automaton(s) if isinstance(s, ForbiddenWordSFT) else s
    by_len = {k: sorted(words(a, k)) for k in range(1, D + 2)}
    levels, bonds = [], []
    prev_index = None
    for k in range(1, D + 1):
        blocks = by_len[k]
        idx = {w: i for i, w in enumerate(blocks)}
        edges = [(idx[w[:-1]], idx[w[1:]]) for w in by_len[k + 1]]
        levels.append(Graph([word_name(w) for w in blocks], edges))
        if prev_index is not None:
            bonds.append(tuple(prev_index[w[:-1]] for w in blocks))
        prev_index = idx
    return Tower(levels, bonds, first_level=1)


def pattern_allowed(t: Tower, n: int, D: int, w: Sequence) -> bool:
    """Is ``w`` (vertices of level ``n``) an allowed word of the projected shift at depth ``D``?"""
    _check_range(t, n, D)
    base = t.level(n)
    letters = [base.names[base.index(v)] for v in w]
    if not letters:
        return True
    return allowed_words_dfa(_project(t, n, D)).accepts(letters)


def _project(t: Tower, n: int, m: int) -> LabeledAutomaton:
    base = t.level(n)
    proj = t.bond(m, n).map
    a = vertex_shift(t.level(m))
    return relabel(a, {a.graph.names[v]: base.names[proj[v]] for v in a.graph.vertices},
                   alphabet=base.names)
