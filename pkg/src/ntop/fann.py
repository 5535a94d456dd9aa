"""Finitely branching graded spaces built from totally bounded metric presentations.

A presentation lists finite nets of centers, one per level, and a distance
oracle good to a requested precision.  The level-``i`` ball around ``c`` has
radius ``2^-i``.  Successors and apartness are chosen by deterministic
threshold rules on oracle answers, each placed halfway between the two cases
the rule has to separate, so every answer errs on the safe side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .core import TOP, DepthExhausted, NtopError, Point, Space, dot_sort_key
from .spaces import fmt_q
from .trees import FragmentError, GradedFragment


class FannError(NtopError):
    """Invalid presentation or a failed construction; the message names the violated condition."""


def _pow2(k: int) -> Fraction:
    return Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)


@dataclass(frozen=True)
class BallDot:
    """The ball of radius ``2^-level`` around ``center``."""

    center: object
    level: int

    @property
    def radius(self) -> Fraction:
        return _pow2(self.level)

    def __str__(self):
        c = fmt_q(self.center) if isinstance(self.center, Fraction) else str(self.center)
        return f"B({c},{self.level})"


@dataclass
class ChoiceTables:
    h: dict = field(default_factory=dict)
    g: dict = field(default_factory=dict)


@dataclass
class MetricPresentation:
    """``levels[i]`` is the level-``i`` net; ``dist(a, b, prec)`` is within ``2^-prec`` of the distance.

    ``value`` maps a center label to a rational, when the space sits inside the reals.
    """

    levels: list
    dist: Callable
    value: Optional[Callable] = None
    name: str = "metric"
    tables: ChoiceTables = field(default_factory=ChoiceTables, repr=False)


def h_choice(pres: MetricPresentation, a: BallDot, b: BallDot) -> int:
    """0 guarantees ``d(a, b) < 2^-t - 2^-s``; 1 guarantees ``d(a, b) > 2^-t - 2^-s - 2^-2s``."""
    s, t = a.level, b.level
    if s <= t:
        raise ValueError(f"h needs a finer first ball (levels {s}, {t})")
    key = (a, b)
    memo = pres.tables.h
    if key not in memo:
        q = pres.dist(a.center, b.center, 2 * s + 2)
        memo[key] = 0 if q < _pow2(t) - _pow2(s) - _pow2(2 * s + 1) else 1
    return memo[key]


def g_choice(pres: MetricPresentation, a: BallDot, b: BallDot) -> int:
    """1 guarantees a gap: ``d(a, b) > 2^-s + 2^-t + 2^-(s+t+1)``; 0 guarantees ``d < 2^-s + 2^-t + 2^-(s+t)``."""
    memo = pres.tables.g
    hit = memo.get((a, b))
    if hit is None:
        s, t = a.level, b.level
        q = pres.dist(a.center, b.center, s + t + 3)
        hit = 1 if q > _pow2(s) + _pow2(t) + 3 * _pow2(s + t + 2) else 0
        # one oracle query per unordered pair keeps g symmetric
        memo[(a, b)] = memo[(b, a)] = hit
    return hit


class FannSpace(Space):
    """Ball dots up to a maximal level, with the successor relation fixed at construction."""

    def __init__(self, pres: MetricPresentation, max_level: int, parents: dict):
        self.pres = pres
        self.max_level = max_level
        self.name = f"fann({pres.name},{max_level})"
        self._parents = parents
        self._children: dict = {TOP: []}
        for d, ps in parents.items():
            self._children.setdefault(d, [])
            for p in ps:
                self._children.setdefault(p, []).append(d)
        self._ancestors: dict = {TOP: frozenset([TOP])}
        for d in sorted(parents, key=lambda d: d.level):
            acc = {d}
            for p in parents[d]:
                acc |= self._ancestors[p]
            self._ancestors[d] = frozenset(acc)

    @property
    def top(self):
        return TOP

    def contains(self, a) -> bool:
        return a is TOP or a in self._parents

    def refines(self, a, b) -> bool:
        return b is TOP or b in self._ancestors[a]

    def apart(self, a, b) -> bool:
        if a is TOP or b is TOP:
            return False
        return g_choice(self.pres, a, b) == 1

    def grd(self, a) -> int:
        return 0 if a is TOP else a.level + 1

    def parents(self, a) -> list:
        return list(self._parents[a])

    def successors(self, a) -> list:
        return sorted(self._children.get(a, []), key=dot_sort_key)

    def format_dot(self, a) -> str:
        return str(a)

    def relation_matrices(self, dots):
        index = {d: i for i, d in enumerate(dots)}
        n = len(dots)
        R = np.zeros((n, n), dtype=bool)
        for i, d in enumerate(dots):
            for b in self._ancestors[d]:
                j = index.get(b)
                if j is not None:
                    R[i, j] = True
        A = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(i, n):
                if self.apart(dots[i], dots[j]):
                    A[i, j] = A[j, i] = True
        return A, R


def check_net(pres: MetricPresentation, max_level: int) -> None:
    """Every level-(i+1) center lies within ``2^-(i+2)`` of some level-``i`` center (up to oracle slack)."""
    if len(pres.levels) <= max_level:
        raise FannError(f"presentation has {len(pres.levels)} levels, need {max_level + 1}")
    for i, net in enumerate(pres.levels[: max_level + 1]):
        if not net:
            raise FannError(f"level {i} has no centers")
        if len(set(net)) != len(net):
            raise FannError(f"level {i} repeats a center")
    for i in range(max_level):
        prec = i + 5
        bound = _pow2(i + 2) + _pow2(prec)
        for c in pres.levels[i + 1]:
            if not any(pres.dist(c, e, prec) <= bound for e in pres.levels[i]):
                raise FannError(f"net condition fails at level {i + 1}: center {c} is farther than "
                                f"2^-{i + 2} from every level-{i} center")


def build_fann(pres: MetricPresentation, max_level: int) -> GradedFragment:
    if max_level < 0:
        raise ValueError("max_level must be a natural number")
    check_net(pres, max_level)
    parents: dict = {}
    for c in pres.levels[0]:
        parents[BallDot(c, 0)] = [TOP]
    for i in range(max_level):
        upper = [BallDot(e, i) for e in pres.levels[i]]
        for c in pres.levels[i + 1]:
            d = BallDot(c, i + 1)
            ps = [u for u in upper if h_choice(pres, d, u) == 0]
            if not ps:
                raise FannError(f"orphan dot {d} at level {i + 1}: no level-{i} ball accepts it")
            parents[d] = ps
    space = FannSpace(pres, max_level, parents)
    for d in parents:
        for b in space._ancestors[d]:
            if b is not TOP and b != d and g_choice(pres, d, b) == 1:
                raise FannError(f"{d} refines {b} but the two are judged apart; "
                                "the presentation or its oracle is inconsistent")
    try:
        return GradedFragment(space, [TOP, *parents])
    except FragmentError as exc:
        raise FannError(f"grading violation: {exc}") from None


def fann_point_value(pres: MetricPresentation, p: Point, k: int) -> Fraction:
    """The center of the ``k``-th dot of ``p`` as a rational."""
    if pres.value is None:
        raise ValueError(f"presentation {pres.name} has no rational values")
    d = p[k]
    if d is TOP:
        raise ValueError("TOP has no center")
    return pres.value(d.center)


def greedy_chain(fragment: GradedFragment, x) -> Point:
    """Level-0 ball nearest ``x``, then repeatedly the successor nearest ``x`` (ties to the first in order).

    The point is finite: pulling past the fragment's last level raises :class:`DepthExhausted`.
    """
    space = fragment.space
    value = space.pres.value
    x = Fraction(x)

    def nearest(cands):
        return min(cands, key=lambda d: (abs(value(d.center) - x), dot_sort_key(d)))

    def gen():
        d = nearest(space.successors(TOP))
        yield d
        while d.level < space.max_level:
            kids = space.successors(d)
            if not kids:
                raise DepthExhausted(f"{d} has no successors")
            d = nearest(kids)
            yield d

    return Point(space, gen(), label=f"greedy({fmt_q(x)})")


# ---------------------------------------------------------------------------
# builtin presentations


def _exact_distance(a, b, prec):
    return abs(Fraction(a) - Fraction(b))


def unit_interval(max_level: int) -> MetricPresentation:
    """[0,1] with the level-``i`` net ``j 2^-(i+2)``, ``0 <= j <= 2^(i+2)``."""
    levels = [[Fraction(j, 1 << (i + 2)) for j in range((1 << (i + 2)) + 1)] for i in range(max_level + 1)]
    return MetricPresentation(levels, _exact_distance, Fraction, "unit-interval")


def single_point(max_level: int) -> MetricPresentation:
    levels = [["x0"] for _ in range(max_level + 1)]
    return MetricPresentation(levels, lambda a, b, prec: Fraction(0), lambda c: Fraction(0), "point")


def _cantor_endpoints(k: int) -> list:
    lefts = [Fraction(0)]
    for j in range(1, k + 1):
        step = Fraction(2, 3**j)
        lefts = [x + d for x in lefts for d in (0, step)]
    width = Fraction(1, 3**k)
    return sorted({x for left in lefts for x in (left, left + width)})


def cantor_set(max_level: int) -> MetricPresentation:
    """The middle-thirds Cantor set; level ``i`` uses the endpoints of the ternary intervals of
    the first depth ``k`` with ``3^-k <= 2^-(i+3)``, so every point of the set is close to a center."""
    levels = []
    for i in range(max_level + 1):
        k = 0
        while 3**k < 1 << (i + 3):
            k += 1
        levels.append(_cantor_endpoints(k))
    return MetricPresentation(levels, _exact_distance, Fraction, "cantor")


BUILTINS = {"unit-interval": unit_interval, "point": single_point, "cantor": cantor_set}


def parse_presentation(text: str, name: str = "file") -> MetricPresentation:
    """Read a presentation file.

    Lines: ``levels=L``; then ``L`` lines of whitespace-separated center labels;
    then either ``distance=exact-rational`` (labels are rationals, distance
    ``|x - y|``) or distance table lines ``a b p/q``.  ``#`` starts a comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("levels="):
        raise FannError("presentation must start with 'levels=L'")
    try:
        n_levels = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise FannError(f"bad header {lines[0]!r}") from None
    if n_levels < 1 or len(lines) < 1 + n_levels:
        raise FannError(f"expected {n_levels} level lines after the header")
    levels = [ln.split() for ln in lines[1 : 1 + n_levels]]
    rest = lines[1 + n_levels :]

    def as_rational(label):
        try:
            return Fraction(label)
        except (ValueError, ZeroDivisionError):
            return None

    rationals = all(as_rational(c) is not None for net in levels for c in net)
    value = (lambda c: Fraction(c)) if rationals else None
    if rest == ["distance=exact-rational"]:
        if not rationals:
            raise FannError("distance=exact-rational needs rational center labels")
        levels = [[Fraction(c) for c in net] for net in levels]
        return MetricPresentation(levels, _exact_distance, Fraction, name)

    table: dict = {}
    for ln in rest:
        parts = ln.split()
        if len(parts) != 3:
            raise FannError(f"bad distance line {ln!r}; expected 'a b p/q'")
        a, b, q = parts
        try:
            d = Fraction(q)
        except (ValueError, ZeroDivisionError):
            raise FannError(f"bad distance {q!r}") from None
        if d < 0:
            raise FannError(f"negative distance in {ln!r}")
        table[(a, b)] = table[(b, a)] = d

    def dist(a, b, prec):
        if a == b:
            return Fraction(0)
        try:
            return table[(a, b)]
        except KeyError:
            raise FannError(f"distance table has no entry for {a} {b}") from None

    return MetricPresentation(levels, dist, value, name)


def load_presentation(source: str, max_level: int) -> MetricPresentation:
    """A builtin name, or a path to a presentation file."""
    if source in BUILTINS:
        return BUILTINS[source](max_level)
    try:
        with open(source) as fh:
            text = fh.read()
    except OSError as exc:
        raise FannError(f"cannot read presentation {source!r}: {exc.strerror}") from None
    return parse_presentation(text, source)


def level_counts(fragment: GradedFragment) -> list:
    counts: dict = {}
    for d in fragment.dots:
        if d is not TOP:
            counts[d.level] = counts.get(d.level, 0) + 1
    return [counts[i] for i in sorted(counts)]


def branching(fragment: GradedFragment) -> tuple:
    """``(min, max, mean)`` successor counts over non-leaf levels; the mean is an exact rational."""
    space = fragment.space
    inner = [d for d in fragment.dots if d is TOP or d.level < space.max_level]
    sizes = [len(fragment.children[d]) for d in inner]
    return min(sizes), max(sizes), Fraction(sum(sizes), len(sizes))


def gap(a: BallDot, b: BallDot, value=Fraction) -> Fraction:
    """Exact gap between two balls of the real line: distance of centers minus both radii."""
    return abs(value(a.center) - value(b.center)) - a.radius - b.radius

