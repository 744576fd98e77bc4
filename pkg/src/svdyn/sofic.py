"""One-sided shift spaces presented by vertex-labeled graphs.

The language of a :class:`LabeledAutomaton` is the set of label sequences
of infinite forward walks that may start at any vertex.  Its allowed words
are the labels of finite walks whose last vertex still has an infinite
continuation; this set is factorial and determines the shift.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .errors import EmptyShiftError, InputError, StateLimitError
from .graph import Graph, trimmed

DEFAULT_MAX_STATES = 1_000_000

Word = tuple


def max_states() -> int:
    raw = os.environ.get("SVDYN_MAX_STATES")
    if not raw:
        return DEFAULT_MAX_STATES
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"SVDYN_MAX_STATES must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("SVDYN_MAX_STATES must be positive")
    return value


def word_name(word: Sequence[str]) -> str:
    """Display name of a block; single-character symbols are concatenated."""
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return ".".join(word)


def _check_alphabet(alphabet) -> tuple:
    alphabet = tuple(str(s) for s in alphabet)
    if not alphabet:
        raise InputError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise InputError("alphabet has duplicate symbols")
    return alphabet


@dataclass(frozen=True)
class LabeledAutomaton:
    graph: Graph
    alphabet: tuple
    labels: tuple

    def __post_init__(self):
        alphabet = _check_alphabet(self.alphabet)
        labels = tuple(str(s) for s in self.labels)
        if len(labels) != len(self.graph):
            raise InputError("labeling must assign a symbol to every vertex")
        bad = set(labels) - set(alphabet)
        if bad:
            raise InputError(f"labels outside the alphabet: {sorted(bad)}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "labels", labels)

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "alphabet": list(self.alphabet),
                "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict) -> "LabeledAutomaton":
        try:
            return cls(Graph.from_json(data["graph"]), tuple(data["alphabet"]),
                       tuple(data["labels"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed automaton JSON: {exc}") from None


def vertex_shift(g: Graph) -> LabeledAutomaton:
    return LabeledAutomaton(g, g.names, g.names)


def relabel(a: LabeledAutomaton, f: Mapping | Callable, alphabet: Sequence | None = None
            ) -> LabeledAutomaton:
    """Apply a letter-to-letter map to every vertex label.

    ``alphabet`` fixes the target alphabet; by default it is the list of
    image symbols in order of first appearance.
    """
    lookup = f.__getitem__ if isinstance(f, Mapping) else f
    table = {}
    for s in a.alphabet:
        try:
            table[s] = str(lookup(s))
        except (KeyError, IndexError):
            raise InputError(f"symbol map is not defined on {s!r}") from None
    if alphabet is None:
        alphabet = tuple(dict.fromkeys(table[s] for s in a.alphabet))
    return LabeledAutomaton(a.graph, tuple(alphabet), tuple(table[s] for s in a.labels))


def core(a: LabeledAutomaton):
    """Trim to vertices with an infinite forward walk; returns (graph, labels)."""
    g, kept = trimmed(a.graph.names, a.graph.edges)
    if g is None:
        raise EmptyShiftError("empty shift")
    return g, tuple(a.labels[i] for i in kept)


def words(a: LabeledAutomaton, n: int) -> set[Word]:
    """All allowed words of length ``n`` by walk enumeration."""
    if n < 0:
        raise InputError("word length must be nonnegative")
    if n == 0:
        return {()}
    g, labels = core(a)
    frontier: dict[Word, set[int]] = {}
    for v in g.vertices:
        frontier.setdefault((labels[v],), set()).add(v)
    for _ in range(n - 1):
        nxt: dict[Word, set[int]] = {}
        for w, ends in frontier.items():
            for u in ends:
                for v in g.succ[u]:
                    nxt.setdefault(w + (labels[v],), set()).add(v)
        frontier = nxt
    return set(frontier)


@dataclass(frozen=True)
class WordDFA:
    """Minimal deterministic acceptor of a factorial language; every state accepts.

    ``delta[q]`` is a tuple of ``(symbol, target)`` pairs sorted by symbol;
    a missing symbol means rejection.  State numbering is canonical (BFS
    from the initial state ``0`` over the sorted alphabet), so two minimal
    DFAs are equal as values iff they accept the same language.
    """

    alphabet: tuple
    delta: tuple

    initial = 0

    def __len__(self):
        return len(self.delta)

    def step(self, q: int, s: str):
        for sym, t in self.delta[q]:
            if sym == s:
                return t
        return None

    def accepts(self, word: Iterable[str]) -> bool:
        q = 0
        for s in word:
            q = self.step(q, s)
            if q is None:
                return False
        return True


def _determinize(a: LabeledAutomaton):
    g, labels = core(a)
    by_label: dict[str, list[int]] = {}
    for v in g.vertices:
        by_label.setdefault(labels[v], []).append(v)
    limit = max_states()
    start = None  # the virtual state before the first letter
    index = {start: 0}
    trans: list[dict] = [{}]
    queue = deque([start])
    while queue:
        S = queue.popleft()
        q = index[S]
        if S is None:
            moves = {s: frozenset(vs) for s, vs in by_label.items()}
        else:
            moves = {}
            for u in S:
                for v in g.succ[u]:
                    moves.setdefault(labels[v], set()).add(v)
            moves = {s: frozenset(T) for s, T in moves.items()}
        for s, T in moves.items():
            if T not in index:
                if len(index) >= limit:
                    raise StateLimitError(
                        f"determinization exceeded {limit} subset states (SVDYN_MAX_STATES)")
                index[T] = len(trans)
                trans.append({})
                queue.append(T)
            trans[q][s] = index[T]
    return trans


def _minimize(trans: list[dict], alphabet: tuple) -> tuple:
    n = len(trans)
    block = [0] * n
    count = 1
    while True:
        sigs = {}
        new_block = []
        for q in range(n):
            sig = (block[q],) + tuple(block[trans[q][s]] if s in trans[q] else -1
                                      for s in alphabet)
            new_block.append(sigs.setdefault(sig, len(sigs)))
        block = new_block
        if len(sigs) == count:
            break
        count = len(sigs)
    # canonical renumbering by BFS from the initial block
    order = {block[0]: 0}
    rep = {block[q]: q for q in reversed(range(n))}
    queue = deque([block[0]])
    delta = []
    while queue:
        b = queue.popleft()
        q = rep[b]
        row = []
        for s in alphabet:
            if s in trans[q]:
                t = block[trans[q][s]]
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
                row.append((s, order[t]))
        delta.append(tuple(row))
    return tuple(delta)


def allowed_words_dfa(a: LabeledAutomaton) -> WordDFA:
    alphabet = tuple(sorted(a.alphabet))
    return WordDFA(alphabet, _minimize(_determinize(a), alphabet))


def _same_alphabet(a: LabeledAutomaton, b: LabeledAutomaton):
    if set(a.alphabet) != set(b.alphabet):
        raise InputError("automata are over different alphabets")


def dfa_subset(da: WordDFA, db: WordDFA) -> bool:
    seen = {(0, 0)}
    queue = deque(seen)
    while queue:
        p, q = queue.popleft()
        for s, p2 in da.delta[p]:
            q2 = db.step(q, s)
            if q2 is None:
                return False
            if (p2, q2) not in seen:
                seen.add((p2, q2))
                queue.append((p2, q2))
    return True


def language_equal(a: LabeledAutomaton, b: LabeledAutomaton) -> bool:
    _same_alphabet(a, b)
    return allowed_words_dfa(a) == allowed_words_dfa(b)


def language_subset(a: LabeledAutomaton, b: LabeledAutomaton) -> bool:
    _same_alphabet(a, b)
    return dfa_subset(allowed_words_dfa(a), allowed_words_dfa(b))


@dataclass(frozen=True)
class ForbiddenWordSFT:
    alphabet: tuple
    M: int
    forbidden: frozenset

    def __post_init__(self):
        alphabet = _check_alphabet(self.alphabet)
        if self.M < 1:
            raise InputError("forbidden word length must be positive")
        forbidden = set()
        for w in self.forbidden:
            w = tuple(w)
            if len(w) != self.M:
                raise InputError(f"forbidden word {word_name(w)!r} does not have length {self.M}")
            if not set(w) <= set(alphabet):
                raise InputError(f"forbidden word {word_name(w)!r} uses unknown symbols")
            forbidden.add(w)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "forbidden", frozenset(forbidden))

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet), "M": self.M,
                "forbidden": sorted(word_name(w) for w in self.forbidden)}

    @classmethod
    def from_json(cls, data: dict) -> "ForbiddenWordSFT":
        try:
            alphabet = tuple(str(s) for s in data["alphabet"])
            M = int(data["M"])
            forbidden = [_parse_word(w, alphabet) for w in data["forbidden"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed SFT JSON: {exc}") from None
        return cls(alphabet, M, frozenset(forbidden))


def _parse_word(w, alphabet) -> Word:
    if isinstance(w, str):
        if all(len(s) == 1 for s in alphabet):
            return tuple(w)
        return tuple(w.split("."))
    return tuple(str(s) for s in w)


def block_automaton(blocks: Iterable[Word], transitions: Iterable[Word] | None = None,
                    alphabet: Sequence[str] | None = None) -> LabeledAutomaton:
    """Higher-block presentation: vertices are blocks, labels their first letters.

    An edge ``u -> v`` exists when ``u`` and ``v`` overlap in all but one
    letter and, if ``transitions`` is given, the merged word belongs to it.
    The result is trimmed to vertices with an infinite continuation.
    """
    blocks = sorted(set(map(tuple, blocks)))
    allowed_merge = None if transitions is None else set(map(tuple, transitions))
    idx = {w: i for i, w in enumerate(blocks)}
    by_prefix: dict[Word, list[int]] = {}
    for w, i in idx.items():
        by_prefix.setdefault(w[:-1], []).append(i)
    edges = []
    for u, i in idx.items():
        for j in by_prefix.get(u[1:], ()):
            if allowed_merge is None or u + blocks[j][-1:] in allowed_merge:
                edges.append((i, j))
    names = [word_name(w) for w in blocks]
    g, kept = trimmed(names, edges)
    if g is None:
        raise EmptyShiftError("empty shift")
    firsts = [blocks[i][0] for i in kept]
    if alphabet is None:
        alphabet = sorted(set(firsts))
    return LabeledAutomaton(g, tuple(alphabet), tuple(firsts))


def recode_to_1step(s: ForbiddenWordSFT):
    """Sliding-block recoding of an M-step SFT into a vertex shift.

    Returns ``(graph, decoder)``; ``decoder[v]`` is the first letter of
    the block at vertex ``v``.
    """
    if s.M < 2:
        raise InputError("recoding needs forbidden words of length at least 2")
    blocks = [w for w in product(s.alphabet, repeat=s.M) if w not in s.forbidden]
    if not blocks:
        raise EmptyShiftError("empty shift")
    a = block_automaton(blocks, alphabet=s.alphabet)
    return a.graph, a.labels


def sft_automaton(s: ForbiddenWordSFT) -> LabeledAutomaton:
    blocks = [w for w in product(s.alphabet, repeat=s.M) if w not in s.forbidden]
    if not blocks:
        raise EmptyShiftError("empty shift")
    return block_automaton(blocks, alphabet=s.alphabet)


def is_k_step_sft(a: LabeledAutomaton, k: int) -> bool:
    """Is the shift determined by its allowed words of length ``k + 1``?"""
    if k < 1:
        raise InputError("k must be at least 1")
    approx = block_automaton(words(a, k + 1), alphabet=a.alphabet)
    return language_equal(approx, a)


def golden_mean() -> LabeledAutomaton:
    """Vertex shift forbidding ``11``."""
    return vertex_shift(Graph(["0", "1"], [(0, 0), (0, 1), (1, 0)]))


def even_shift() -> LabeledAutomaton:
    """Sofic shift with an even number of 0s between any two 1s."""
    g = Graph(["p", "q", "r"], [(0, 0), (0, 1), (1, 2), (2, 1), (2, 0)])
    return LabeledAutomaton(g, ("0", "1"), ("1", "0", "0"))


def full_shift(alphabet: Sequence[str] = ("0", "1")) -> LabeledAutomaton:
    n = len(alphabet)
    return vertex_shift(Graph(list(alphabet), [(i, j) for i in range(n) for j in range(n)]))
