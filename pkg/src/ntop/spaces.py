"""Concrete spaces: rational-interval reals, lean dyadic sigma_R and sigma_[0,1],
n-ary real trees, Baire and Cantor space, finite products.

Dot text syntax::

    TOP             the maximal dot
    D(n,m)          lean dyadic [n/2^m, (n+2)/2^m]
    N(b,n,m)        n-ary [n/b^m, (n+1)/b^m]
    (k1 k2 ... kj)  Baire / Cantor sequence, () is the maximal dot
    [p/q,r/s]       rational interval
    <x, y>          product pair
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import NamedTuple, Optional

import numpy as np

from .core import TOP, Point, Space, UngradedSpace, UnsupportedEnumeration

Rational = Fraction


def fmt_q(q: Fraction) -> str:
    return str(Fraction(q))


# ---------------------------------------------------------------------------
# dot types


@dataclass(frozen=True, order=True)
class Lean:
    """Lean dyadic interval ``[n/2^m, (n+2)/2^m]``."""

    n: int
    m: int

    @property
    def lo(self) -> Fraction:
        return Fraction(self.n, 1 << self.m)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.n + 2, 1 << self.m)

    @property
    def width(self) -> Fraction:
        return Fraction(2, 1 << self.m)

    def __str__(self):
        return f"D({self.n},{self.m})"


@dataclass(frozen=True, order=True)
class NAry:
    """Base-``base`` interval ``[n/b^m, (n+1)/b^m]``."""

    base: int
    n: int
    m: int

    @property
    def lo(self) -> Fraction:
        return Fraction(self.n, self.base**self.m)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.n + 1, self.base**self.m)

    @property
    def width(self) -> Fraction:
        return Fraction(1, self.base**self.m)

    def digits(self) -> list:
        """The ``m`` base-``b`` digits of ``n``; only meaningful for ``0 <= n < b^m``."""
        out = []
        n = self.n
        for _ in range(self.m):
            n, d = divmod(n, self.base)
            out.append(d)
        return out[::-1]

    def __str__(self):
        return f"N({self.base},{self.n},{self.m})"


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"rational interval needs lo < hi, got [{self.lo}, {self.hi}]")

    def __str__(self):
        return f"[{fmt_q(self.lo)},{fmt_q(self.hi)}]"


@dataclass(frozen=True)
class PairDot:
    first: object
    second: object

    def __str__(self):
        return f"<{self.first}, {self.second}>"


class Relations(NamedTuple):
    apart: bool
    refines: bool  # first argument refines the second
    refined_by: bool  # second argument refines the first


# ---------------------------------------------------------------------------
# interval-based spaces


def _interval_kernel(space, dots):
    """Vectorized apart/refines for spaces whose non-top dots are closed intervals."""
    n = len(dots)
    unbounded = np.zeros(n, dtype=bool)
    los, his = [], []
    for i, d in enumerate(dots):
        iv = space.interval(d)
        if iv is None:
            unbounded[i] = True
            los.append(Fraction(0))
            his.append(Fraction(0))
        else:
            los.append(iv[0])
            his.append(iv[1])
    den = 1
    for q in los + his:
        den = den * q.denominator // math.gcd(den, q.denominator)
    lo_i = [q.numerator * (den // q.denominator) for q in los]
    hi_i = [q.numerator * (den // q.denominator) for q in his]
    big = max((abs(v) for v in lo_i + hi_i), default=0)
    dtype = np.int64 if big < 2**62 else object
    lo = np.array(lo_i, dtype=dtype)
    hi = np.array(hi_i, dtype=dtype)
    A = (hi[:, None] < lo[None, :]) | (hi[None, :] < lo[:, None])
    R = (lo[None, :] <= lo[:, None]) & (hi[:, None] <= hi[None, :])
    A = np.asarray(A, dtype=bool)
    R = np.asarray(R, dtype=bool)
    if unbounded.any():
        A[unbounded, :] = False
        A[:, unbounded] = False
        R[:, unbounded] = True
        R[unbounded, :] = unbounded[None, :]
    return A, R


class IntervalSpace(Space):
    """Relations of the rational-interval reals, evaluated on exact endpoints.

    ``interval(a)`` gives ``(lo, hi)``, or ``None`` for the unbounded maximal dot.
    """

    def interval(self, a):
        if a is TOP:
            return None
        return a.lo, a.hi

    def apart(self, a, b) -> bool:
        ia, ib = self.interval(a), self.interval(b)
        if ia is None or ib is None:
            return False
        return ib[1] < ia[0] or ia[1] < ib[0]

    def refines(self, a, b) -> bool:
        ia, ib = self.interval(a), self.interval(b)
        if ib is None:
            return True
        if ia is None:
            return False
        return ib[0] <= ia[0] and ia[1] <= ib[1]

    def relation_matrices(self, dots):
        return _interval_kernel(self, dots)


class RationalIntervals(IntervalSpace):
    """All closed rational intervals plus ``(-inf, inf)``; a reference space for relation checks."""

    name = "Rrat"

    @property
    def top(self):
        return TOP

    def contains(self, a) -> bool:
        return a is TOP or isinstance(a, RatInterval)

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(self.name)


class SigmaR(IntervalSpace):
    """The lean dyadic spraid: TOP plus ``D(n,m)`` for all integers n and naturals m."""

    name = "sigmaR"

    @property
    def top(self):
        return TOP

    def contains(self, a) -> bool:
        return a is TOP or (isinstance(a, Lean) and a.m >= 0)

    def grd(self, a) -> int:
        return 0 if a is TOP else a.m + 1

    def parents(self, a) -> list:
        if a is TOP:
            return []
        if a.m == 0:
            return [TOP]
        # D(k, m-1) contains D(n, m) iff 2k <= n <= 2k + 2
        return [Lean(k, a.m - 1) for k in range(-((2 - a.n) // 2), a.n // 2 + 1)]

    def successors(self, a) -> list:
        if a is TOP:
            raise UnsupportedEnumeration("TOP of sigma_R has a successor D(n,0) for every integer n")
        return lean_children(a)

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(self.name)


class SigmaUnit(IntervalSpace):
    """Lean dyadic fann for [0,1]: ``D(n,m)`` with ``m >= 1``, ``0 <= n``, ``n + 2 <= 2^m``."""

    name = "sigma01"

    @property
    def top(self):
        return Lean(0, 1)

    def contains(self, a) -> bool:
        return isinstance(a, Lean) and a.m >= 1 and 0 <= a.n and a.n + 2 <= (1 << a.m)

    def grd(self, a) -> int:
        return a.m - 1

    def parents(self, a) -> list:
        return [b for b in SIGMA_R.parents(a) if b is not TOP and self.contains(b)]

    def successors(self, a) -> list:
        return lean_children(a)

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(self.name)


class NAryReals(IntervalSpace):
    """Binary / ternary / decimal reals: TOP plus ``[n/b^m, (n+1)/b^m]``; a tree."""

    def __init__(self, base: int):
        if base < 2:
            raise ValueError("base must be at least 2")
        self.base = base
        self.name = {2: "binary", 3: "ternary", 10: "decimal"}.get(base, f"base{base}")

    @property
    def top(self):
        return TOP

    def contains(self, a) -> bool:
        return a is TOP or (isinstance(a, NAry) and a.base == self.base and a.m >= 0)

    def grd(self, a) -> int:
        return 0 if a is TOP else a.m + 1

    def parents(self, a) -> list:
        if a is TOP:
            return []
        if a.m == 0:
            return [TOP]
        return [NAry(self.base, a.n // self.base, a.m - 1)]

    def successors(self, a) -> list:
        if a is TOP:
            raise UnsupportedEnumeration("TOP of the n-ary reals has infinitely many successors")
        b = self.base
        return [NAry(b, b * a.n + j, a.m + 1) for j in range(b)]

    def __eq__(self, other):
        return type(other) is type(self) and other.base == self.base

    def __hash__(self):
        return hash((self.name, self.base))


class NAryUnit(IntervalSpace):
    """n-ary tree on [0,1]: ``[n/b^m, (n+1)/b^m]`` with ``0 <= n < b^m``; maximal dot ``N(b,0,0)``."""

    def __init__(self, base: int):
        if base < 2:
            raise ValueError("base must be at least 2")
        self.base = base
        self.name = {2: "binary01", 3: "ternary01", 10: "decimal01"}.get(base, f"base{base}01")

    @property
    def top(self):
        return NAry(self.base, 0, 0)

    def contains(self, a) -> bool:
        return isinstance(a, NAry) and a.base == self.base and a.m >= 0 and 0 <= a.n < self.base**a.m

    def grd(self, a) -> int:
        return a.m

    def parents(self, a) -> list:
        return [] if a.m == 0 else [NAry(self.base, a.n // self.base, a.m - 1)]

    def successors(self, a) -> list:
        b = self.base
        return [NAry(b, b * a.n + j, a.m + 1) for j in range(b)]

    def __eq__(self, other):
        return type(other) is type(self) and other.base == self.base

    def __hash__(self):
        return hash((self.name, self.base))


# ---------------------------------------------------------------------------
# Baire, Cantor


class Baire(Space):
    """Finite sequences of naturals; refinement is extension, apartness is mutual non-extension.

    ``alphabet=k`` restricts entries to ``0..k-1`` (``k=2`` is Cantor space).
    """

    def __init__(self, alphabet: Optional[int] = None):
        self.alphabet = alphabet
        self.name = "baire" if alphabet is None else ("cantor" if alphabet == 2 else f"baire{alphabet}")

    @property
    def top(self):
        return ()

    def contains(self, a) -> bool:
        if not isinstance(a, tuple) or not all(isinstance(k, int) and k >= 0 for k in a):
            return False
        return self.alphabet is None or all(k < self.alphabet for k in a)

    def refines(self, a, b) -> bool:
        return len(b) <= len(a) and a[: len(b)] == b

    def apart(self, a, b) -> bool:
        k = min(len(a), len(b))
        return a[:k] != b[:k]

    def grd(self, a) -> int:
        return len(a)

    def parents(self, a) -> list:
        return [a[:-1]] if a else []

    def successors(self, a) -> list:
        if self.alphabet is None:
            raise UnsupportedEnumeration("Baire space is infinitely branching")
        return [a + (k,) for k in range(self.alphabet)]

    def format_dot(self, a) -> str:
        return "(" + " ".join(str(k) for k in a) + ")"

    def relation_matrices(self, dots):
        # common-prefix lengths decide both relations
        lens = np.array([len(d) for d in dots], dtype=np.int64)
        width = int(lens.max()) if len(dots) else 0
        digits = np.full((len(dots), width), -1, dtype=np.int64)
        for i, d in enumerate(dots):
            digits[i, : len(d)] = d
        lcp = np.zeros((len(dots), len(dots)), dtype=np.int64)
        alive = np.ones((len(dots), len(dots)), dtype=bool)
        for k in range(width):
            col = digits[:, k]
            alive &= (col[:, None] == col[None, :]) & (col[:, None] >= 0)
            lcp += alive
        shorter = np.minimum(lens[:, None], lens[None, :])
        A = lcp < shorter
        R = (lens[None, :] <= lens[:, None]) & (lcp >= lens[None, :])
        return A, R

    def __eq__(self, other):
        return type(other) is type(self) and other.alphabet == self.alphabet

    def __hash__(self):
        return hash((self.name, self.alphabet))


# ---------------------------------------------------------------------------
# products


class ProductSpace(Space):
    """Finite product of two graded spaces over equal-grade pairs of dots."""

    def __init__(self, first: Space, second: Space):
        for s in (first, second):
            try:
                s.grd(s.top)
            except UngradedSpace:
                raise UngradedSpace(f"product needs graded factors; {s.name} is ungraded") from None
        self.first = first
        self.second = second
        self.name = f"{first.name}x{second.name}"

    @property
    def top(self):
        return PairDot(self.first.top, self.second.top)

    def contains(self, a) -> bool:
        return (
            isinstance(a, PairDot)
            and self.first.contains(a.first)
            and self.second.contains(a.second)
            and self.first.grd(a.first) == self.second.grd(a.second)
        )

    def apart(self, a, b) -> bool:
        return self.first.apart(a.first, b.first) or self.second.apart(a.second, b.second)

    def refines(self, a, b) -> bool:
        return self.first.refines(a.first, b.first) and self.second.refines(a.second, b.second)

    def grd(self, a) -> int:
        return self.first.grd(a.first)

    def parents(self, a) -> list:
        return [PairDot(x, y) for x, y in cartesian(self.first.parents(a.first), self.second.parents(a.second))]

    def successors(self, a) -> list:
        return [
            PairDot(x, y)
            for x, y in cartesian(self.first.successors(a.first), self.second.successors(a.second))
        ]

    def format_dot(self, a) -> str:
        if a == self.top and a.first is TOP:
            return "TOP"
        return f"<{self.first.format_dot(a.first)}, {self.second.format_dot(a.second)}>"

    def relation_matrices(self, dots):
        def component(space, parts):
            uniq = list(dict.fromkeys(parts))
            index = {d: i for i, d in enumerate(uniq)}
            A, R = space.relation_matrices(uniq)
            idx = np.array([index[d] for d in parts], dtype=np.int64)
            return A[np.ix_(idx, idx)], R[np.ix_(idx, idx)]

        A1, R1 = component(self.first, [d.first for d in dots])
        A2, R2 = component(self.second, [d.second for d in dots])
        return A1 | A2, R1 & R2

    def __eq__(self, other):
        return type(other) is type(self) and (other.first, other.second) == (self.first, self.second)

    def __hash__(self):
        return hash((self.name, self.first, self.second))


def product_space(s1: Space, s2: Space) -> ProductSpace:
    return ProductSpace(s1, s2)


SIGMA_R = SigmaR()
SIGMA_UNIT = SigmaUnit()
R_RAT = RationalIntervals()
BINARY = NAryReals(2)
TERNARY = NAryReals(3)
DECIMAL = NAryReals(10)
BINARY_UNIT = NAryUnit(2)
TERNARY_UNIT = NAryUnit(3)
DECIMAL_UNIT = NAryUnit(10)
BAIRE = Baire()
CANTOR = Baire(alphabet=2)
SIGMA_R2 = ProductSpace(SIGMA_R, SIGMA_R)


# ---------------------------------------------------------------------------
# operations on lean dyadics


def lean_apart(a, b) -> bool:
    return SIGMA_R.apart(a, b)


def lean_children(a) -> list:
    """The three successors ``D(2n+j, m+1)``, ``j = 0, 1, 2``, of a non-TOP lean dot."""
    if a is TOP:
        raise UnsupportedEnumeration("TOP of sigma_R has a successor D(n,0) for every integer n")
    return [Lean(2 * a.n + j, a.m + 1) for j in range(3)]


def hull_at_depth(lo, hi, t: int) -> Lean:
    """The depth-``t`` lean dot ``D(floor(lo * 2^t), t)``, which contains ``[lo, hi]``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if t < 0:
        raise ValueError("depth must be a natural number")
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi - lo > Fraction(1, 1 << t):
        raise ValueError(f"interval [{lo}, {hi}] is wider than 2^-{t}")
    return Lean(math.floor(lo * (1 << t)), t)


def from_rational(q, schedule=None) -> Point:
    """Canonical sigma_R point for ``q``: index k holds ``hull_at_depth(q, q, k)``.

    ``schedule`` (strictly increasing ``k -> depth``) gives alternative
    representations of the same real.
    """
    q = Fraction(q)
    if schedule is None:
        return Point.from_function(SIGMA_R, lambda k: hull_at_depth(q, q, k), graded=True, label=fmt_q(q))
    return Point.from_function(SIGMA_R, lambda k: hull_at_depth(q, q, schedule(k)), label=fmt_q(q))


def nary_point(q, space) -> Point:
    """Canonical point of ``q`` in an n-ary space: ``N(b, floor(q b^m), m)`` at index m.

    In the unit spaces the index is clamped to ``b^m - 1`` so that ``q = 1`` stays inside [0,1].
    """
    q = Fraction(q)
    b = space.base
    if isinstance(space, NAryUnit):
        if not 0 <= q <= 1:
            raise ValueError(f"{q} is outside [0,1]")
        return Point.from_function(
            space, lambda m: NAry(b, min(math.floor(q * b**m), b**m - 1), m), graded=True, label=fmt_q(q)
        )
    return Point.from_function(space, lambda m: NAry(b, math.floor(q * b**m), m), graded=True, label=fmt_q(q))


def from_ternary(q) -> Point:
    return nary_point(q, TERNARY_UNIT)


def from_binary(q) -> Point:
    return nary_point(q, BINARY)


def pair_point(p: Point, q: Point, space: Optional[ProductSpace] = None) -> Point:
    """Zip two points whose index-k dots share a grade into a point of the product."""
    space = space or ProductSpace(p.space, q.space)

    def gen():
        k = 0
        while True:
            a, b = p[k], q[k]
            if space.first.grd(a) != space.second.grd(b):
                raise ValueError(f"index {k}: grades differ ({a} vs {b}); resynchronize the points first")
            yield PairDot(a, b)
            k += 1

    return Point(space, gen(), graded=p.graded and q.graded)


def nary_dot_relations(base: int, a, c) -> Relations:
    for d in (a, c):
        if d is not TOP and d.base != base:
            raise ValueError(f"dot {d} is not base {base}")
    space = NAryReals(base)
    return Relations(space.apart(a, c), space.refines(a, c), space.refines(c, a))


def baire_relations(a: tuple, c: tuple) -> Relations:
    return Relations(BAIRE.apart(a, c), BAIRE.refines(a, c), BAIRE.refines(c, a))


# ---------------------------------------------------------------------------
# fragment enumerators (finite dot lists)


def sigma_r_dots(depth: int, window=None, top: bool = True) -> list:
    """Lean dots with ``m <= depth``; ``window`` is an int (|n| <= window) or a callable ``m -> bound``."""
    out = [TOP] if top else []
    for m in range(depth + 1):
        w = window(m) if callable(window) else window
        out.extend(Lean(n, m) for n in range(-w, w + 1))
    return out


def sigma_unit_dots(depth: int) -> list:
    """sigma_[0,1] dots of grade <= depth."""
    return [Lean(n, m) for m in range(1, depth + 2) for n in range(0, (1 << m) - 1)]


def nary_dots(base: int, depth: int, cap: int = 512) -> list:
    """n-ary reals fragment: TOP plus ``|n| <= min(2 b^m, cap)``-windowed dots for ``m < depth``."""
    out = [TOP]
    for m in range(depth):
        w = min(2 * base**m, cap)
        out.extend(NAry(base, n, m) for n in range(-w, w))
    return out


def nary_unit_dots(base: int, depth: int) -> list:
    return [NAry(base, n, m) for m in range(depth + 1) for n in range(base**m)]


def baire_dots(length: int, alphabet: int) -> list:
    out = []
    for k in range(length + 1):
        out.extend(cartesian(range(alphabet), repeat=k))
    return [tuple(d) for d in out]


def product_dots(space: ProductSpace, first_dots: list, second_dots: list) -> list:
    by_grade: dict = {}
    for d in second_dots:
        by_grade.setdefault(space.second.grd(d), []).append(d)
    return [PairDot(a, b) for a in first_dots for b in by_grade.get(space.first.grd(a), [])]


# ---------------------------------------------------------------------------
# text syntax

_INT = r"\s*(-?\d+)\s*"
_LEAN_RE = re.compile(rf"^D\({_INT},{_INT}\)$")
_NARY_RE = re.compile(rf"^N\({_INT},{_INT},{_INT}\)$")
_BAIRE_RE = re.compile(r"^\(\s*((?:\d+\s*)*)\)$")
_RAT_RE = re.compile(r"^\[([^,\]]+),([^,\]]+)\]$")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}") from None


def _split_top_level(text: str) -> list:
    depth, start, parts = 0, 0, []
    for i, ch in enumerate(text):
        if ch in "([<":
            depth += 1
        elif ch in ")]>":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def parse_dot(text: str):
    """Parse the dot text syntax described in the module docstring."""
    s = text.strip()
    if s == "TOP":
        return TOP
    if m := _LEAN_RE.match(s):
        n, depth = int(m.group(1)), int(m.group(2))
        if depth < 0:
            raise ValueError(f"negative depth in {text!r}")
        return Lean(n, depth)
    if m := _NARY_RE.match(s):
        base, n, depth = (int(g) for g in m.groups())
        if depth < 0 or base < 2:
            raise ValueError(f"bad n-ary dot {text!r}")
        return NAry(base, n, depth)
    if m := _BAIRE_RE.match(s):
        return tuple(int(k) for k in m.group(1).split())
    if m := _RAT_RE.match(s):
        return RatInterval(parse_rational(m.group(1)), parse_rational(m.group(2)))
    if s.startswith("<") and s.endswith(">"):
        parts = _split_top_level(s[1:-1])
        if len(parts) == 2:
            return PairDot(parse_dot(parts[0]), parse_dot(parts[1]))
    raise ValueError(f"unrecognized dot syntax: {text!r}")


def format_dot(d) -> str:
    if isinstance(d, tuple):
        return BAIRE.format_dot(d)
    if isinstance(d, PairDot):
        return f"<{format_dot(d.first)}, {format_dot(d.second)}>"
    return str(d)
