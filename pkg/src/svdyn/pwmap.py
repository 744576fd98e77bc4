"""Piecewise-affine set-valued maps on finite unions of rational intervals.

A map is given by affine branches on pairwise disjoint pieces plus a
finite list of exceptional points carrying explicit finite value sets.
Pieces and exceptional points partition the domain, so every domain point
has exactly one owner.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InputError
from .graph import Graph
from .intervals import EMPTY, Interval, IntervalSet, fmt, hausdorff, rat
from .tower import Tower


@dataclass(frozen=True)
class Branch:
    piece: Interval
    alpha: Fraction
    beta: Fraction

    def __call__(self, x) -> Fraction:
        return self.alpha * x + self.beta

    def image(self, S: IntervalSet) -> IntervalSet:
        part = S & IntervalSet([self.piece])
        if part.empty:
            return EMPTY
        return part.affine(self.alpha, self.beta)

    def preimage(self, S: IntervalSet) -> IntervalSet:
        piece = IntervalSet([self.piece])
        if self.alpha == 0:
            return piece if self.beta in S else EMPTY
        return IntervalSet(p.affine_preimage(self.alpha, self.beta) for p in S) & piece

    def to_json(self) -> dict:
        return {"piece": self.piece.to_json(), "alpha": fmt(self.alpha), "beta": fmt(self.beta)}


@dataclass(frozen=True)
class PiecewiseSetMap:
    domain: IntervalSet
    branches: tuple
    points: tuple = ()  # ((x, (values...)), ...) sorted by x
    graph_closed: bool = False
    name: str = ""
    _point_values: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        branches = tuple(self.branches)
        pts = []
        for x, values in self.points:
            values = tuple(sorted(set(rat(v) for v in values)))
            if not values:
                raise InputError(f"exceptional point {fmt(rat(x))} has no values")
            pts.append((rat(x), values))
        pts.sort()
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "_point_values", dict(pts))
        if len(self._point_values) != len(pts):
            raise InputError("duplicate exceptional points")
        owned = [IntervalSet([b.piece]) for b in branches] + [IntervalSet.point(x) for x, _ in pts]
        for i, b in enumerate(branches):
            if b.piece.empty:
                raise InputError(f"branch {i} has an empty piece")
        total = EMPTY
        for s in owned:
            if not (total & s).empty:
                raise InputError(f"pieces overlap at {total & s}")
            total = total | s
        if total != self.domain:
            raise InputError(f"pieces cover {total}, domain is {self.domain}")
        if self.graph_closed:
            bad = closed_graph_violations(self)
            if bad:
                raise InputError(
                    "graph is not closed at " + ", ".join(fmt(x) for x, _ in bad))

    def owner(self, x):
        if x in self._point_values:
            return None
        for b in self.branches:
            if x in b.piece:
                return b
        raise InputError(f"{fmt(x)} is outside the domain {self.domain}")

    def values(self, x) -> tuple:
        """Sorted finite value set at ``x``."""
        x = rat(x)
        b = self.owner(x)
        if b is None:
            return self._point_values[x]
        return (b(x),)

    def to_json(self) -> dict:
        data = {"domain": [[fmt(p.lo), fmt(p.hi)] if p.lo_closed and p.hi_closed else p.to_json()
                           for p in self.domain],
                "branches": [b.to_json() for b in self.branches],
                "points": [{"x": fmt(x), "values": [fmt(v) for v in vs]} for x, vs in self.points],
                "graph_closed": self.graph_closed}
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseSetMap":
        try:
            domain = IntervalSet.from_json(data["domain"])
            branches = [Branch(Interval.from_json(b["piece"]), rat(b["alpha"]), rat(b["beta"]))
                        for b in data["branches"]]
            points = [(rat(p["x"]), [rat(v) for v in p["values"]]) for p in data.get("points", [])]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed map JSON: {exc}") from None
        return cls(domain, tuple(branches), tuple(points), bool(data.get("graph_closed", False)),
                   str(data.get("name", "")))


def closed_graph_violations(F: PiecewiseSetMap) -> list:
    """Boundary points where a branch's one-sided limit is missing from the value set.

    Returns ``[(x, limit), ...]``.  Branches are continuous inside their
    pieces, so open piece endpoints lying in the domain are the only places
    the graph can fail to be closed.
    """
    out = []
    for b in F.branches:
        p = b.piece
        for x, closed in ((p.lo, p.lo_closed), (p.hi, p.hi_closed)):
            if closed or x not in F.domain:
                continue
            limit = b(x)
            if limit not in F.values(x):
                out.append((x, limit))
    return sorted(set(out))


def eval_map(F: PiecewiseSetMap, x) -> IntervalSet:
    return IntervalSet.points(F.values(x))


def image_set(F: PiecewiseSetMap, S: IntervalSet) -> IntervalSet:
    if not S <= F.domain:
        raise InputError(f"set {S} is not contained in the domain {F.domain}")
    out = [b.image(S) for b in F.branches]
    out.append(IntervalSet.points(v for x, vs in F.points if x in S for v in vs))
    return IntervalSet(p for s in out for p in s)


def preimage_set(F: PiecewiseSetMap, S: IntervalSet) -> IntervalSet:
    """``{x : F(x) meets S}``."""
    if S.empty:
        return EMPTY
    out = [b.preimage(S) for b in F.branches]
    out.append(IntervalSet.points(x for x, vs in F.points if any(v in S for v in vs)))
    return IntervalSet(p for s in out for p in s)


def ball(F: PiecewiseSetMap, x, eps) -> IntervalSet:
    """Closed ball around ``x`` in the domain's relative metric."""
    x, eps = rat(x), rat(eps)
    return IntervalSet.closed(x - eps, x + eps) & F.domain


def set_ball(F: PiecewiseSetMap, centers: Iterable, r) -> IntervalSet:
    r = rat(r)
    return IntervalSet(Interval(c - r, c + r) for c in centers) & F.domain


def tuple_discriminant(F: PiecewiseSetMap, pattern: Sequence[IntervalSet]) -> IntervalSet:
    """Points starting an orbit that visits ``pattern[0], pattern[1], ...`` in order."""
    if not pattern:
        raise InputError("pattern must be nonempty")
    return _suffix_discriminants(F, pattern)[0]


def _suffix_discriminants(F, pattern) -> list[IntervalSet]:
    out = [pattern[-1] & F.domain]
    for A in reversed(pattern[:-1]):
        out.append(A & preimage_set(F, out[-1]))
    out.reverse()
    return out


@dataclass(frozen=True)
class PseudoOrbit:
    points: tuple
    delta: Fraction

    def __post_init__(self):
        pts = tuple(rat(x) for x in self.points)
        if not pts:
            raise InputError("pseudo-orbit must have at least one point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "delta", rat(self.delta))

    def to_json(self) -> dict:
        return {"delta": fmt(self.delta), "points": [fmt(x) for x in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "PseudoOrbit":
        try:
            return cls(tuple(data["points"]), data["delta"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed pseudo-orbit JSON: {exc}") from None


def jump_sizes(F: PiecewiseSetMap, points: Sequence) -> list[Fraction]:
    """``d(F(x_i), x_{i+1})`` for consecutive points."""
    pts = [rat(x) for x in points]
    for x in pts:
        if x not in F.domain:
            raise InputError(f"{fmt(x)} is outside the domain {F.domain}")
    return [min(abs(y - v) for v in F.values(x)) for x, y in zip(pts, pts[1:])]


def is_pseudo_orbit(F: PiecewiseSetMap, po: PseudoOrbit) -> bool:
    return all(d < po.delta for d in jump_sizes(F, po.points))


@dataclass(frozen=True)
class ShadowResult:
    witness_set: IntervalSet
    orbit: tuple | None

    @property
    def found(self) -> bool:
        return not self.witness_set.empty


def shadow_search(F: PiecewiseSetMap, po, eps) -> ShadowResult:
    """Look for a true orbit staying within ``eps`` of every pseudo-orbit point.

    The witness set is the orbital discriminant of the closed balls around
    the points.  When it is nonempty an orbit is built forward, each step
    choosing a value that still lies in the next suffix discriminant.
    """
    eps = rat(eps)
    if eps <= 0:
        raise InputError("epsilon must be positive")
    points = po.points if isinstance(po, PseudoOrbit) else tuple(rat(x) for x in po)
    balls = [ball(F, x, eps) for x in points]
    suffix = _suffix_discriminants(F, balls)
    if suffix[0].empty:
        return ShadowResult(suffix[0], None)
    z = suffix[0].pick()
    orbit = [z]
    for W in suffix[1:]:
        z = IntervalSet.points(F.values(z)) & W
        z = z.pick()
        orbit.append(z)
    return ShadowResult(suffix[0], tuple(orbit))


@dataclass(frozen=True)
class BallCriterion:
    holds: bool
    violations: tuple  # checked points where the inclusion fails
    violation_set: IntervalSet
    checked: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "violations": [fmt(x) for x in self.violations],
                "violation_set": self.violation_set.to_json(),
                "violation_text": str(self.violation_set), "checked": self.checked}


def _ball_sides(F, x, eps, r):
    """Raw component lists of both sides of the ball inclusion at ``x``.

    ``lhs`` is ``B(F(x), r)`` and ``rhs`` is ``F(B(x, eps))``, each as an
    un-normalized list of intervals in a fixed enumeration order.
    """
    B = Interval(x - eps, x + eps)
    rhs = []
    for b in F.branches:
        for comp in F.domain:
            part = B.intersect(comp).intersect(b.piece)
            rhs.append(None if part.empty else part.affine(b.alpha, b.beta))
    for p, vs in F.points:
        if p in B:
            rhs.extend(Interval(v, v) for v in vs)
        else:
            rhs.extend(None for _ in vs)
    lhs = []
    for v in F.values(x):
        for comp in F.domain:
            part = Interval(v - r, v + r).intersect(comp)
            lhs.append(None if part.empty else part)
    return lhs, rhs


def _inclusion_holds(lhs, rhs) -> bool:
    L = IntervalSet(p for p in lhs if p is not None)
    R = IntervalSet(p for p in rhs if p is not None)
    return L <= R


def check_ball_criterion(F: PiecewiseSetMap, eps, delta) -> BallCriterion:
    """Test ``B(F(x), eps + delta) ⊂ F(B(x, eps))`` for every ``x`` in the domain.

    The domain is cut at every point where the combinatorics of either side
    can change; inside each open cell the two sides are unions of intervals
    whose endpoints are affine in ``x``.  Cells are cut again wherever two
    endpoint functions cross, after which the inclusion has constant truth
    value on each open sub-cell.  Breakpoints and one interior point per
    sub-cell are then checked exactly.
    """
    eps, delta = rat(eps), rat(delta)
    if eps <= 0 or delta <= 0:
        raise InputError("epsilon and delta must be positive")
    r = eps + delta
    cuts = set()
    anchors = set()
    for b in F.branches:
        anchors |= {b.piece.lo, b.piece.hi}
    for comp in F.domain:
        anchors |= {comp.lo, comp.hi}
    anchors |= {x for x, _ in F.points}
    for a in anchors:
        cuts |= {a, a - eps, a + eps}
    for b in F.branches:
        if b.alpha != 0:
            for comp in F.domain:
                for c in (comp.lo, comp.hi):
                    cuts |= {(c - b.beta - r) / b.alpha, (c - b.beta + r) / b.alpha}
    lo, hi = F.domain.lo, F.domain.hi
    cuts = sorted(c for c in cuts if lo <= c <= hi)

    checks = [(c, Interval(c, c)) for c in cuts if c in F.domain]
    for a, c in zip(cuts, cuts[1:]):
        if (a + c) / 2 in F.domain:
            checks.extend(_refine_cell(F, a, c, eps, r))

    bad = [(x, cell) for x, cell in checks
           if not _inclusion_holds(*_ball_sides(F, x, eps, r))]
    violation_set = IntervalSet(cell for _, cell in bad) & F.domain
    return BallCriterion(not bad, tuple(sorted(x for x, _ in bad)), violation_set, len(checks))


def _refine_cell(F, a, c, eps, r) -> list:
    x1, x2 = (2 * a + c) / 3, (a + 2 * c) / 3
    s1 = _ball_sides(F, x1, eps, r)
    s2 = _ball_sides(F, x2, eps, r)
    funcs = []
    for side1, side2 in zip(s1, s2):
        for p, q in zip(side1, side2):
            if (p is None) != (q is None):
                raise AssertionError("cell decomposition missed a breakpoint")
            if p is None:
                continue
            if (p.lo_closed, p.hi_closed) != (q.lo_closed, q.hi_closed):
                raise AssertionError("cell decomposition missed a breakpoint")
            for u, v in ((p.lo, q.lo), (p.hi, q.hi)):
                slope = (v - u) / (x2 - x1)
                funcs.append((slope, u - slope * x1))
    cuts = {a, c}
    for (m1, k1), (m2, k2) in combinations(set(funcs), 2):
        if m1 != m2:
            x = (k2 - k1) / (m1 - m2)
            if a < x < c:
                cuts.add(x)
    cuts = sorted(cuts)
    out = [(x, Interval(x, x)) for x in cuts[1:-1]]
    out += [((u + v) / 2, Interval(u, v, False, False)) for u, v in zip(cuts, cuts[1:])]
    return out


@dataclass(frozen=True)
class Partition:
    cells: tuple
    names: tuple = ()

    def __post_init__(self):
        cells = tuple(self.cells)
        if not cells or any(c.empty for c in cells):
            raise InputError("partition cells must be nonempty")
        names = tuple(self.names) or tuple(f"U{i}" for i in range(len(cells)))
        if len(names) != len(cells):
            raise InputError("partition needs one name per cell")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "names", tuple(str(n) for n in names))

    def __len__(self):
        return len(self.cells)

    @property
    def union(self) -> IntervalSet:
        return IntervalSet(p for c in self.cells for p in c)

    def check_partitions(self, domain: IntervalSet):
        for (i, a), (j, b) in combinations(enumerate(self.cells), 2):
            if a.hi < b.lo or b.hi < a.lo:
                continue
            if not a.isdisjoint(b):
                raise InputError(f"cells {self.names[i]} and {self.names[j]} overlap")
        if self.union != domain:
            raise InputError(f"partition covers {self.union}, domain is {domain}")

    def cell_of(self, x) -> int:
        for i, c in enumerate(self.cells):
            if x in c:
                return i
        raise InputError(f"{fmt(rat(x))} lies in no cell")

    def mesh(self) -> Fraction:
        return max(c.hi - c.lo for c in self.cells)

    def to_json(self) -> dict:
        return {"cells": [c.to_json() for c in self.cells], "names": list(self.names)}

    @classmethod
    def from_json(cls, data: dict) -> "Partition":
        try:
            return cls(tuple(IntervalSet.from_json(c) for c in data["cells"]),
                       tuple(data.get("names", ())))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed partition JSON: {exc}") from None


def quotient_graph(F: PiecewiseSetMap, P: Partition) -> Graph:
    """Cells as vertices, with ``U -> V`` whenever ``F(U)`` meets ``V``."""
    P.check_partitions(F.domain)
    edges = []
    for i, U in enumerate(P.cells):
        img = image_set(F, U)
        hit = [j for j, V in enumerate(P.cells) if not img.isdisjoint(V)]
        if not hit:
            raise InputError(f"cell {P.names[i]} has an image meeting no cell")
        edges.extend((i, j) for j in hit)
    return Graph(P.names, edges)


def refinement_map(fine: Partition, coarse: Partition) -> tuple:
    """Index of the coarse cell containing each fine cell."""
    out = []
    for i, c in enumerate(fine.cells):
        owners = [j for j, d in enumerate(coarse.cells) if c <= d]
        if len(owners) != 1:
            raise InputError(f"cell {fine.names[i]} is not contained in a single coarser cell")
        out.append(owners[0])
    return tuple(out)


def quotient_tower(F: PiecewiseSetMap, refinements: Sequence[Partition],
                   first_level: int = 0) -> Tower:
    if not refinements:
        raise InputError("need at least one partition")
    levels = [quotient_graph(F, P) for P in refinements]
    bonds = [refinement_map(fine, coarse) for coarse, fine in zip(refinements, refinements[1:])]
    return Tower(levels, bonds, first_level=first_level)


@dataclass(frozen=True)
class SnappedMap:
    """``x -> union of the cells meeting F(x)``, stored as regions of constant cell pattern."""

    partition: Partition
    regions: tuple  # ((cell index, region IntervalSet, frozenset of hit cells), ...)

    def hits(self, x) -> frozenset:
        x = rat(x)
        for _, region, cells in self.regions:
            if x in region:
                return cells
        raise InputError(f"{fmt(x)} is outside the domain")

    def eval(self, x) -> IntervalSet:
        return IntervalSet(p for j in sorted(self.hits(x)) for p in self.partition.cells[j])

    def cell_graph(self) -> Graph:
        edges = {(i, j) for i, _, cells in self.regions for j in cells}
        return Graph(self.partition.names, edges)

    def to_json(self) -> dict:
        names = self.partition.names
        return {"regions": [{"cell": names[i], "region": region.to_json(),
                             "value_cells": sorted(names[j] for j in cells)}
                            for i, region, cells in self.regions]}


def snap_to_shadowing(F: PiecewiseSetMap, P: Partition) -> SnappedMap:
    P.check_partitions(F.domain)
    regions = []
    for b in F.branches:
        pieces = [(j, b.preimage(V)) for j, V in enumerate(P.cells)]
        pieces = [(j, R) for j, R in pieces if not R.empty]
        for i, C in enumerate(P.cells):
            for j, R in pieces:
                sub = C & R
                if not sub.empty:
                    regions.append((i, sub, frozenset([j])))
        covered = IntervalSet([b.piece])
        for _, R in pieces:
            covered = covered - R
        if not covered.empty:
            # values leaving every cell; the snapped value there is empty
            for i, C in enumerate(P.cells):
                sub = C & covered
                if not sub.empty:
                    regions.append((i, sub, frozenset()))
    for x, vs in F.points:
        hit = frozenset(j for j, V in enumerate(P.cells) if any(v in V for v in vs))
        regions.append((P.cell_of(x), IntervalSet.point(x), hit))
    regions.sort(key=lambda t: (t[1].lo, t[0]))
    return SnappedMap(P, tuple(regions))


def snapped_distance(F: PiecewiseSetMap, snapped: SnappedMap, x) -> Fraction:
    """Hausdorff distance between ``F(x)`` and the snapped value at ``x``."""
    return hausdorff(F.values(x), snapped.eval(x))


# --- built-in maps and partitions ------------------------------------------------

def _doubling(values_at_one, name, closed) -> PiecewiseSetMap:
    one, two = Fraction(1), Fraction(2)
    return PiecewiseSetMap(
        IntervalSet.closed(0, 2),
        (Branch(Interval(Fraction(0), one, True, False), two, Fraction(0)),
         Branch(Interval(one, two, False, True), two, -two)),
        ((one, values_at_one),),
        graph_closed=closed, name=name)


def doubling_sv() -> PiecewiseSetMap:
    """Doubling on ``[0, 2]`` with both one-sided limits ``{0, 2}`` at ``x = 1``."""
    return _doubling((0, 2), "doubling_sv", True)


def doubling_nonclosed() -> PiecewiseSetMap:
    """Same branches but ``F(1) = {0}``; the graph is not closed at 1."""
    return _doubling((0,), "doubling_nonclosed", False)


def cantor_left_ends(depth: int) -> list[Fraction]:
    """Left endpoints of the ``2**depth`` ternary cylinders of the Cantor set in [0, 1]."""
    ends = [Fraction(0)]
    for i in range(1, depth + 1):
        step = Fraction(2, 3 ** i)
        ends = [e + d for e in ends for d in (Fraction(0), step)]
    return ends


def cantor_ternary(depth: int) -> PiecewiseSetMap:
    """Tripling map on three copies of the Cantor set, cut off at ``depth``.

    The copies live in [0, 1], [1, 2] and [2, 3]; the shared points 1 and 2
    are exceptional with value set ``{0, 3}``.  One branch per cylinder.
    """
    if depth < 0:
        raise InputError("depth must be nonnegative")
    width = Fraction(1, 3 ** depth)
    branches = []
    for a0 in range(3):
        for s in cantor_left_ends(depth):
            lo, hi = a0 + s, a0 + s + width
            piece = Interval(lo, hi, lo not in (1, 2), hi not in (1, 2))
            branches.append(Branch(piece, Fraction(3), Fraction(-3 * a0)))
    domain = IntervalSet(Interval(b.piece.lo, b.piece.hi) for b in branches)
    points = ((Fraction(1), (0, 3)), (Fraction(2), (0, 3)))
    return PiecewiseSetMap(domain, tuple(branches), points, graph_closed=True,
                           name=f"cantor_ternary({depth})")


def climb_pseudo_orbit(k: int = 6, delta=Fraction(1, 64)) -> PseudoOrbit:
    """Pseudo-orbit for ``doubling_sv`` that climbs towards 2 and then drops.

    ``1, 2 - 2**-k, 2 - 2**-(k-1), ..., 3/2, 1 + delta, 2 * delta``.
    """
    delta = rat(delta)
    pts = [Fraction(1)] + [2 - Fraction(1, 2 ** (k - j + 1)) for j in range(1, k + 1)]
    return PseudoOrbit(tuple(pts + [1 + delta, 2 * delta]), delta)


def trap_pseudo_orbit(n: int = 30, delta=Fraction(1, 64)) -> PseudoOrbit:
    """``1 - delta/8`` followed by ``n`` copies of the point 2."""
    delta = rat(delta)
    return PseudoOrbit((1 - delta / 8,) + (Fraction(2),) * n, delta)


BUILTINS = {
    "doubling_sv": doubling_sv,
    "doubling_nonclosed": doubling_nonclosed,
    "cantor_ternary": cantor_ternary,
}


def builtin(name: str, depth: int | None = None) -> PiecewiseSetMap:
    """Look up a built-in map; ``cantor_ternary(3)`` and ``cantor_ternary`` with ``depth`` both work."""
    base, arg = name, depth
    if name.endswith(")") and "(" in name:
        base, raw = name[:-1].split("(", 1)
        try:
            arg = int(raw)
        except ValueError:
            raise InputError(f"bad depth in {name!r}") from None
    if base not in BUILTINS:
        raise InputError(f"unknown built-in map {name!r}; choose from {sorted(BUILTINS)}")
    if base == "cantor_ternary":
        return cantor_ternary(3 if arg is None else arg)
    return BUILTINS[base]()


def first_owner_partition(blocks: Sequence[IntervalSet], names: Sequence[str] = ()) -> Partition:
    """Partition from overlapping closed blocks; shared points go to the earliest block."""
    cells = []
    taken = EMPTY
    for blk in blocks:
        cells.append(blk - taken)
        taken = taken | blk
    return Partition(tuple(cells), tuple(names))


def uniform_partition(lo, hi, count: int, prefix: str = "I") -> Partition:
    """``count`` equal cells ``[a, b)`` covering ``[lo, hi]``; the last one is closed."""
    lo, hi = rat(lo), rat(hi)
    h = (hi - lo) / count
    cells = [IntervalSet([Interval(lo + k * h, lo + (k + 1) * h, True, k == count - 1)])
             for k in range(count)]
    return Partition(tuple(cells), tuple(f"{prefix}{k}" for k in range(count)))


def dyadic_partition(F: PiecewiseSetMap, m: int) -> Partition:
    """Cells of length ``2**-m`` over the hull of the domain (which must be an interval)."""
    if len(F.domain) != 1:
        raise InputError("dyadic partitions need an interval domain")
    lo, hi = F.domain.lo, F.domain.hi
    count = (hi - lo) * 2 ** m
    if count.denominator != 1:
        raise InputError("domain length is not a multiple of the mesh")
    return uniform_partition(lo, hi, int(count), prefix="D")


def cantor_partition(F: PiecewiseSetMap, j: int) -> Partition:
    """Ternary cylinder partition of a ``cantor_ternary`` domain.

    Depth 1 gives the three copies; each further level splits every cell in
    two.  Points shared by neighbouring cells go to the lower cell.
    """
    if j < 1:
        raise InputError("cylinder depth must be at least 1")
    ends = cantor_left_ends(j - 1)
    width = Fraction(1, 3 ** (j - 1))
    blocks, names = [], []
    for a0 in range(3):
        for k, s in enumerate(ends):
            block = IntervalSet.closed(a0 + s, a0 + s + width) & F.domain
            blocks.append(block)
            digits = format(k, f"0{j - 1}b").replace("1", "2") if j > 1 else ""
            names.append(f"{a0}.{digits}" if digits else str(a0))
    return first_owner_partition(blocks, names)
