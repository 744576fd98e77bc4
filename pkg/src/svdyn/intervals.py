"""Exact rationals and finite unions of rational intervals.

Endpoints carry open/closed flags: images and preimages of half-open
branch pieces are half-open, and closing them would change the answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable

from .errors import InputError

Rat = Fraction


def rat(x) -> Fraction:
    """Parse ``"p/q"``, a decimal string, an int or a Fraction exactly."""
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {x!r}") from None
    raise InputError(f"refusing to convert {type(x).__name__} {x!r} to a rational")


def fmt(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi and not self.empty

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)

    def minus(self, other: "Interval") -> list["Interval"]:
        if self.intersect(other).empty:
            return [self]
        left = self.intersect(Interval(self.lo, other.lo, self.lo_closed, not other.lo_closed))
        right = self.intersect(Interval(other.hi, self.hi, not other.hi_closed, self.hi_closed))
        return [p for p in (left, right) if not p.empty]

    def affine(self, alpha: Fraction, beta: Fraction) -> "Interval":
        if alpha > 0:
            return Interval(alpha * self.lo + beta, alpha * self.hi + beta,
                            self.lo_closed, self.hi_closed)
        if alpha < 0:
            return Interval(alpha * self.hi + beta, alpha * self.lo + beta,
                            self.hi_closed, self.lo_closed)
        return Interval(beta, beta)

    def affine_preimage(self, alpha: Fraction, beta: Fraction) -> "Interval":
        """``{x : alpha*x + beta in self}`` for nonzero ``alpha``."""
        return self.affine(1 / alpha, -beta / alpha)

    def __str__(self):
        if self.is_point:
            return "{" + fmt(self.lo) + "}"
        return (("[" if self.lo_closed else "(") + fmt(self.lo) + ", " + fmt(self.hi)
                + ("]" if self.hi_closed else ")"))

    def to_json(self) -> dict:
        return {"lo": fmt(self.lo), "hi": fmt(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}

    @classmethod
    def from_json(cls, data) -> "Interval":
        if isinstance(data, (list, tuple)):
            if len(data) != 2:
                raise InputError(f"interval must be [lo, hi], got {data!r}")
            return cls(rat(data[0]), rat(data[1]))
        try:
            return cls(rat(data["lo"]), rat(data["hi"]),
                       bool(data.get("lo_closed", True)), bool(data.get("hi_closed", True)))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed interval: {exc}") from None


def _sort_key(iv: Interval):
    return (iv.lo, not iv.lo_closed)


class IntervalSet:
    """Finite union of intervals kept sorted, disjoint and non-touching."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        object.__setattr__(self, "parts", _normalize(parts))

    def __setattr__(self, name, value):
        raise AttributeError("IntervalSet is immutable")

    @classmethod
    def closed(cls, lo, hi) -> "IntervalSet":
        return cls([Interval(rat(lo), rat(hi))])

    @classmethod
    def point(cls, x) -> "IntervalSet":
        x = rat(x)
        return cls([Interval(x, x)])

    @classmethod
    def points(cls, xs: Iterable) -> "IntervalSet":
        return cls(Interval(rat(x), rat(x)) for x in xs)

    def __bool__(self):
        return bool(self.parts)

    @property
    def empty(self) -> bool:
        return not self.parts

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"IntervalSet({self})"

    def __str__(self):
        return " ∪ ".join(str(p) for p in self.parts) if self.parts else "∅"

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.parts)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        j = 0
        b = other.parts
        for a in self.parts:
            for p in b[j:]:
                if p.lo > a.hi:
                    break
                piece = a.intersect(p)
                if not piece.empty:
                    out.append(piece)
            while j < len(b) and b[j].hi < a.lo:
                j += 1
        return IntervalSet(out)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        current = list(self.parts)
        for b in other.parts:
            nxt = []
            for a in current:
                nxt.extend(a.minus(b))
            current = nxt
        return IntervalSet(current)

    def __le__(self, other: "IntervalSet") -> bool:
        return (self - other).empty

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return (self & other).empty

    def affine(self, alpha, beta) -> "IntervalSet":
        alpha, beta = rat(alpha), rat(beta)
        return IntervalSet(p.affine(alpha, beta) for p in self.parts)

    def closure(self) -> "IntervalSet":
        return IntervalSet(Interval(p.lo, p.hi) for p in self.parts)

    @property
    def lo(self) -> Fraction:
        return self.parts[0].lo

    @property
    def hi(self) -> Fraction:
        return self.parts[-1].hi

    def pick(self) -> Fraction:
        """Midpoint of the first component."""
        if not self.parts:
            raise InputError("cannot pick a point from the empty set")
        p = self.parts[0]
        return (p.lo + p.hi) / 2

    def distance(self, x) -> Fraction:
        """Distance from ``x`` to the closure of the set."""
        if not self.parts:
            raise InputError("distance to the empty set is undefined")
        best = None
        for p in self.parts:
            d = Fraction(0) if p.lo <= x <= p.hi else min(abs(x - p.lo), abs(x - p.hi))
            if best is None or d < best:
                best = d
        return best

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]

    @classmethod
    def from_json(cls, data) -> "IntervalSet":
        if not isinstance(data, list):
            raise InputError("interval set must be a JSON list")
        return cls(Interval.from_json(d) for d in data)


def _normalize(parts: Iterable[Interval]) -> tuple:
    items = sorted((p for p in parts if not p.empty), key=_sort_key)
    out: list[Interval] = []
    for p in items:
        if out:
            c = out[-1]
            if p.lo < c.hi or (p.lo == c.hi and (c.hi_closed or p.lo_closed)):
                if p.hi > c.hi:
                    hi, hc = p.hi, p.hi_closed
                elif p.hi < c.hi:
                    hi, hc = c.hi, c.hi_closed
                else:
                    hi, hc = c.hi, c.hi_closed or p.hi_closed
                out[-1] = Interval(c.lo, hi, c.lo_closed, hc)
                continue
        out.append(p)
    return tuple(out)


EMPTY = IntervalSet()


def hausdorff(points: Iterable, S: IntervalSet) -> Fraction:
    """Hausdorff distance between a finite point set and the closure of ``S``."""
    pts = sorted(set(rat(p) for p in points))
    if not pts or S.empty:
        raise InputError("Hausdorff distance needs two nonempty sets")
    forward = max(S.distance(y) for y in pts)
    P = IntervalSet.points(pts)
    candidates = []
    for part in S.parts:
        candidates += [part.lo, part.hi]
        for a, b in zip(pts, pts[1:]):
            mid = (a + b) / 2
            if part.lo <= mid <= part.hi:
                candidates.append(mid)
    backward = max(P.distance(z) for z in candidates)
    return max(forward, backward)
