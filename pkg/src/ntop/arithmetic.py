"""Exact real arithmetic on sigma_R points.

Negation, min and max are plain refinement maps: on lean dyadic dots they
are exact interval operations that land back on the lean grid.  Addition
and multiplication are transducers: the exact interval image of the input
pair is computed with rationals, and the output descends from its previous
value to the leftmost lean child containing that image, as far as possible.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import TOP, Point, StallError, default_fuel
from .morphisms import RefinementMap, Transducer, apply_map, run_transducer
from .spaces import SIGMA_R, SIGMA_R2, Lean, PairDot, fmt_q, hull_at_depth, pair_point


def _neg(a):
    return TOP if a is TOP else Lean(-a.n - 2, a.m)


def _pair_op(pick):
    def fn(pair):
        a, b = pair.first, pair.second
        if a is TOP:
            return TOP
        return Lean(pick(a.n, b.n), a.m)

    return fn


def neg_map() -> RefinementMap:
    return RefinementMap(SIGMA_R, SIGMA_R, _neg, "neg")


def max_map() -> RefinementMap:
    return RefinementMap(SIGMA_R2, SIGMA_R, _pair_op(max), "max")


def min_map() -> RefinementMap:
    return RefinementMap(SIGMA_R2, SIGMA_R, _pair_op(min), "min")


def _const_op(c, pick, name):
    c = Fraction(c)

    def fn(a):
        if a is TOP:
            return TOP
        return Lean(pick(a.n, math.floor(c * (1 << a.m))), a.m)

    return RefinementMap(SIGMA_R, SIGMA_R, fn, f"{name}({fmt_q(c)})")


def max_const(c) -> RefinementMap:
    """``x -> max(x, c)``: interval max against the canonical hull of ``c`` at the same depth."""
    return _const_op(c, max, "max")


def min_const(c) -> RefinementMap:
    return _const_op(c, min, "min")


# ---------------------------------------------------------------------------
# transducers


def descend(state, lo: Fraction, hi: Fraction):
    """Walk down from ``state`` through leftmost lean children that contain ``[lo, hi]``.

    ``lo < hi`` is required: a single point has no narrowest containing dot.
    """
    if not lo < hi:
        raise ValueError(f"descent needs a proper interval, got [{lo}, {hi}]")
    if state is TOP:
        k = math.ceil(hi - 2)
        if k > lo:
            return TOP
        state = Lean(k, 0)
    while True:
        for j in range(3):
            child = Lean(2 * state.n + j, state.m + 1)
            if child.lo <= lo and hi <= child.hi:
                state = child
                break
        else:
            return state


def _sum_interval(a: Lean, b: Lean):
    return a.lo + b.lo, a.hi + b.hi


def _product_interval(a: Lean, b: Lean):
    ends = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return min(ends), max(ends)


def _interval_step(image):
    def step(state, pair: PairDot):
        if pair.first is TOP:
            return state
        lo, hi = image(pair.first, pair.second)
        return descend(state, lo, hi)

    return step


def add_transducer() -> Transducer:
    return Transducer(SIGMA_R2, SIGMA_R, _interval_step(_sum_interval), "add")


def mul_transducer() -> Transducer:
    return Transducer(SIGMA_R2, SIGMA_R, _interval_step(_product_interval), "mul")


# ---------------------------------------------------------------------------
# point-level operations


def regrade(p: Point, fuel: Optional[int] = None) -> Point:
    """An equivalent sigma_R point whose index-k dot has depth exactly k.

    The depth-k dot is the floor hull of the first dot of ``p`` narrower than
    ``2^-(k+1)``; that extra halving is what keeps consecutive hulls nested.
    """
    if p.graded:
        return p
    fuel = default_fuel() if fuel is None else fuel

    def gen():
        i = 0
        for k in range(0, 1 << 62):
            bound = Fraction(1, 1 << (k + 1))
            pulled = 0
            while True:
                d = p[i]
                if d is not TOP and d.width <= bound:
                    break
                i += 1
                pulled += 1
                if pulled > fuel:
                    raise StallError(f"regrade({p.label}): no dot of width <= 2^-{k + 1} within {fuel} pulls",
                                     fuel=fuel, pulls=pulled)
            yield hull_at_depth(d.lo, d.hi, k)

    return Point(SIGMA_R, gen(), graded=True, label=p.label)


def negate(p: Point, fuel=None) -> Point:
    q = apply_map(neg_map(), p, fuel)
    q.graded = p.graded
    return q


def _pair(p, q, fuel):
    return pair_point(regrade(p, fuel), regrade(q, fuel), SIGMA_R2)


def add(p: Point, q: Point, fuel=None) -> Point:
    return run_transducer(add_transducer(), _pair(p, q, fuel), fuel)


def mul(p: Point, q: Point, fuel=None) -> Point:
    return run_transducer(mul_transducer(), _pair(p, q, fuel), fuel)


def minimum(p: Point, q: Point, fuel=None) -> Point:
    r = apply_map(min_map(), _pair(p, q, fuel), fuel)
    r.graded = True
    return r


def maximum(p: Point, q: Point, fuel=None) -> Point:
    r = apply_map(max_map(), _pair(p, q, fuel), fuel)
    r.graded = True
    return r


@dataclass(frozen=True)
class DyadicAnswer:
    dot: Lean

    @property
    def lo(self) -> Fraction:
        return self.dot.lo

    @property
    def hi(self) -> Fraction:
        return self.dot.hi

    @property
    def width(self) -> Fraction:
        return self.dot.width

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self):
        return f"{self.dot} = [{fmt_q(self.lo)}, {fmt_q(self.hi)}]"


def evaluate(p: Point, k: int, fuel: Optional[int] = None) -> DyadicAnswer:
    """Pull ``p`` until a dot of depth at least ``k`` (width at most ``2^(1-k)``) appears."""
    if k < 0:
        raise ValueError("precision must be a natural number")
    fuel = default_fuel() if fuel is None else fuel
    budget = fuel * (k + 1)
    for i in range(budget):
        d = p[i]
        if d is not TOP and d.m >= k:
            return DyadicAnswer(d)
    raise StallError(f"evaluate: no dot of depth {k} within {budget} pulls", fuel=fuel, pulls=budget)


class BallCall(enum.Enum):
    IN = "IN"
    OUT = "OUT"
    LET = "LET"

    def __str__(self):
        return self.value


def hawkeye_decide(line, ball: Point, tol: int, fuel: Optional[int] = None) -> BallCall:
    """Call a ball against a line; touching the line is IN, undecidable within ``2^-tol`` is LET."""
    if tol < 1:
        raise ValueError("tolerance must be at least 1")
    line = Fraction(line)
    fuel = default_fuel() if fuel is None else fuel
    budget = fuel * (tol + 1)
    small = Fraction(1, 1 << tol)
    for i in range(budget):
        d = ball[i]
        if d is TOP:
            continue
        if d.hi <= line:
            return BallCall.IN
        if d.lo > line:
            return BallCall.OUT
        if d.width <= small:
            return BallCall.LET
    raise StallError(f"hawkeye: undecided after {budget} pulls", fuel=fuel, pulls=budget)
