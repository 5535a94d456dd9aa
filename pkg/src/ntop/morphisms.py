"""Refinement maps, stream transducers, and the conversion of transducers into
sigma_R-valued refinement maps by two-level widening.

A :class:`RefinementMap` is a pure dot-to-dot function.  A :class:`Transducer`
is a state-passing step function ``step(previous_output, input_dot)``; on the
successor trails of a trea the parent is unique, so folding ``step`` along a
trail is the same thing as a map defined on trails.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .core import (
    TOP,
    ContractViolation,
    Point,
    Space,
    StallError,
    default_fuel,
)
from .spaces import (
    BINARY,
    BINARY_UNIT,
    SIGMA_R,
    TERNARY_UNIT,
    Lean,
    NAry,
)
from .trees import GradedFragment


@dataclass(frozen=True)
class RefinementMap:
    domain: Space
    codomain: Space
    fn: Callable
    name: str = "f"

    def __call__(self, a):
        return self.fn(a)

    def __repr__(self):
        return f"RefinementMap({self.name}: {self.domain.name} -> {self.codomain.name})"


def identity(space: Space) -> RefinementMap:
    return RefinementMap(space, space, lambda a: a, "id")


def compose(f: RefinementMap, g: RefinementMap) -> RefinementMap:
    """``a -> g(f(a))``."""
    if f.codomain != g.domain:
        raise ValueError(f"cannot compose: {f.name} lands in {f.codomain.name}, {g.name} reads {g.domain.name}")
    return RefinementMap(f.domain, g.codomain, lambda a: g.fn(f.fn(a)), f"{g.name}.{f.name}")


def _collapse(space: Space, outputs, fuel: int, what: str):
    """Drop repeats from a weakly descending stream; stall after ``fuel`` repeats in a row."""
    last = None
    idle = 0
    for d in outputs:
        if last is None:
            last = d
            yield d
            continue
        if d == last:
            idle += 1
            if idle > fuel:
                raise StallError(f"{what}: no strict descent after {idle} pulls", fuel=fuel, pulls=idle)
            continue
        if not space.refines(d, last):
            raise ContractViolation(f"{what}: {space.format_dot(d)} does not refine {space.format_dot(last)}")
        idle = 0
        last = d
        yield d


def apply_map(f: RefinementMap, p: Point, fuel: Optional[int] = None) -> Point:
    """The image point ``f(p[0]), f(p[1]), ...`` with consecutive repeats collapsed."""
    fuel = default_fuel() if fuel is None else fuel
    images = (f.fn(d) for d in p)
    return Point(f.codomain, _collapse(f.codomain, images, fuel, f"apply {f.name}"), label=f"{f.name}({p.label})")


def find_monotonicity_violation(f: RefinementMap, dots) -> Optional[tuple]:
    """First pair ``(a, b)`` with ``a <= b`` but not ``f(a) <= f(b)``, over all pairs of ``dots``."""
    import numpy as np

    if isinstance(dots, GradedFragment):
        dots = dots.dots
    dots = list(dots)
    _, R = f.domain.relation_matrices(dots)
    image = {}
    for i, j in zip(*np.nonzero(R)):
        a, b = dots[i], dots[j]
        fa = image[a] if a in image else image.setdefault(a, f.fn(a))
        fb = image[b] if b in image else image.setdefault(b, f.fn(b))
        if not f.codomain.refines(fa, fb):
            return a, b
    return None


def check_monotone(f: RefinementMap, fragment) -> bool:
    return find_monotonicity_violation(f, fragment) is None


# ---------------------------------------------------------------------------
# transducers


@dataclass(frozen=True)
class Transducer:
    """``step(state, dot)`` must return a refinement of ``state``; the initial state is the codomain's top."""

    domain: Space
    codomain: Space
    step: Callable
    name: str = "t"

    @property
    def initial(self):
        return self.codomain.top

    @classmethod
    def from_map(cls, f: RefinementMap) -> "Transducer":
        return cls(f.domain, f.codomain, lambda state, d: f.fn(d), f"trail({f.name})")


def run_transducer(t: Transducer, p: Point, fuel: Optional[int] = None) -> Point:
    """Feed ``p`` through ``t``; emit each output that strictly refines the previous one."""
    fuel = default_fuel() if fuel is None else fuel
    cod = t.codomain

    def gen():
        state = t.initial
        idle = 0
        for d in p:
            new = t.step(state, d)
            if not cod.refines(new, state):
                raise ContractViolation(
                    f"{t.name}: output {cod.format_dot(new)} does not refine state {cod.format_dot(state)}"
                )
            if new == state:
                idle += 1
                if idle > fuel:
                    raise StallError(f"{t.name}: no output after {idle} input dots", fuel=fuel, pulls=idle)
                continue
            idle = 0
            state = new
            yield new

    return Point(cod, gen(), label=f"{t.name}({p.label})")


# ---------------------------------------------------------------------------
# two-level widening and the conversion into refinement maps


def hat_widen(c):
    """``[(4s+i)/2^(t+2), (4s+i+2)/2^(t+2)]`` with ``1 <= i <= 4`` widens to ``[s/2^t, (s+2)/2^t]``.

    Dots of depth below 2, and TOP, widen to TOP.
    """
    if c is TOP or c.m < 2:
        return TOP
    s = (c.n - 1) // 4
    return Lean(s, c.m - 2)


def intersect_lean(dots) -> object:
    """Intersection of lean dyadic dots (TOP is neutral), which must itself be a lean dot."""
    finite = [d for d in dots if d is not TOP]
    if not finite:
        return TOP
    lo = max(d.lo for d in finite)
    hi = min(d.hi for d in finite)
    if lo >= hi:
        raise ContractViolation(f"intersection [{lo}, {hi}] of {', '.join(map(str, finite))} is not a dot")
    width = hi - lo
    num, den = width.numerator, width.denominator
    # width must be 2^(1-m) for a natural m
    exponent = num.bit_length() - den.bit_length()
    if num & (num - 1) or den & (den - 1) or exponent > 1:
        raise ContractViolation(f"intersection [{lo}, {hi}] has width {width}, not a lean dyadic width")
    m = 1 - exponent
    n = lo * (1 << m)
    if n.denominator != 1:
        raise ContractViolation(f"intersection [{lo}, {hi}] is off the depth-{m} grid")
    return Lean(int(n), m)


class TrailConversion:
    """Memoized value sets of a transducer over the successor trails of a graded space.

    ``values(a)`` is the set of transducer outputs over all successor trails
    from the maximal dot to ``a``, by dynamic programming over predecessors.
    """

    def __init__(self, t: Transducer, space: Optional[Space] = None):
        self.t = t
        self.space = space or t.domain
        self._values: dict = {}
        self._image: dict = {}

    def values(self, a) -> frozenset:
        memo = self._values
        if a in memo:
            return memo[a]
        space = self.space
        # resolve ancestors bottom-up without deep recursion
        stack, order = [a], []
        while stack:
            d = stack.pop()
            if d in memo or d in order:
                continue
            order.append(d)
            if d != space.top:
                stack.extend(p for p in space.parents(d) if p not in memo)
        for d in sorted(order, key=space.grd):
            if d in memo:
                continue
            if d == space.top:
                memo[d] = frozenset([self.t.initial])
                continue
            vs = frozenset(self.t.step(v, d) for p in space.parents(d) for v in memo[p])
            self._check_touching(d, vs)
            memo[d] = vs
        return memo[a]

    def _check_touching(self, d, vs):
        cod = self.t.codomain
        vals = list(vs)
        for i, x in enumerate(vals):
            for y in vals[i + 1 :]:
                if cod.apart(x, y):
                    raise ContractViolation(
                        f"{self.t.name}: values {cod.format_dot(x)} and {cod.format_dot(y)} at "
                        f"{self.space.format_dot(d)} are apart; not a valid trail morphism"
                    )

    def __call__(self, a):
        if a not in self._image:
            self._image[a] = intersect_lean(hat_widen(v) for v in self.values(a))
        return self._image[a]


def value_sets(t: Transducer, fragment: GradedFragment) -> dict:
    conv = TrailConversion(t, fragment.space)
    return {d: conv.values(d) for d in fragment.by_grade()}


def trail_to_refinement(t: Transducer, fragment: Optional[GradedFragment] = None) -> RefinementMap:
    """Refinement map ``g(a) = intersection of hat_widen(v)`` over the value set of ``a``.

    With a fragment, every value set on it is computed (and checked) up front;
    dots outside it are handled lazily through the space's predecessors.
    """
    if t.codomain != SIGMA_R:
        raise ValueError("conversion by widening needs a transducer into sigma_R")
    conv = TrailConversion(t, fragment.space if fragment is not None else t.domain)
    if fragment is not None:
        for d in fragment.by_grade():
            conv(d)
    return RefinementMap(conv.space, SIGMA_R, conv, f"widen({t.name})")


# ---------------------------------------------------------------------------
# the Cantor function and the binary embedding


def _cantor_dot(a: NAry) -> NAry:
    if not TERNARY_UNIT.contains(a):
        raise ValueError(f"{a} is not a ternary dot inside [0,1]")
    n = 0
    for pos, digit in enumerate(a.digits()):
        if digit == 1:
            # plateau: value 0.b_1...b_{j-1}1 in binary; take the dot just above it
            n = (2 * n + 1) << (a.m - pos - 1)
            return NAry(2, n, a.m)
        n = 2 * n + digit // 2
    return NAry(2, n, a.m)


cantor_map = RefinementMap(TERNARY_UNIT, BINARY_UNIT, _cantor_dot, "cantor")


def _embed_binary(a):
    if a is TOP:
        return TOP
    if a.base != 2:
        raise ValueError(f"{a} is not a binary dot")
    return Lean(a.n, a.m)


embed_binary = RefinementMap(BINARY, SIGMA_R, _embed_binary, "embed_binary")
