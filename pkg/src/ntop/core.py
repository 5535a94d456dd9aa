"""Spaces of basic dots, points as shrinking dot streams, apartness on points.

A space is anything implementing the :class:`Space` contract: decidable
``apart`` and ``refines`` on a countable set of dots, a maximal dot, and
(for graded spaces) ``grd``, ``parents`` and ``successors``.  Dots are
immutable, hashable values built from integers and rationals only.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, is_dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

DEFAULT_FUEL = 64


class NtopError(Exception):
    """Base class for errors raised by this package."""


class UnsupportedEnumeration(NtopError):
    """A per-dot enumeration would be infinite (e.g. the successors of TOP in sigma_R)."""


class UngradedSpace(NtopError):
    """A grading query was made on a space without a trail grading."""


class StallError(NtopError):
    """A stream made no progress within its fuel budget."""

    def __init__(self, message, fuel=None, pulls=None):
        super().__init__(message)
        self.fuel = fuel
        self.pulls = pulls


class DepthExhausted(NtopError):
    """A point was asked for a dot beyond the finite structure it lives in."""


class ContractViolation(NtopError):
    """An input broke a documented contract (not a usage error)."""


def default_fuel() -> int:
    """Productivity fuel, overridable through the ``NTOP_FUEL`` environment variable."""
    raw = os.environ.get("NTOP_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        fuel = int(raw)
    except ValueError:
        raise ValueError(f"NTOP_FUEL must be an integer, got {raw!r}") from None
    if fuel < 1:
        raise ValueError("NTOP_FUEL must be at least 1")
    return fuel


class _Top:
    """The maximal dot sentinel shared by spaces whose maximal dot has no finite description."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"

    __str__ = __repr__

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()


def dot_sort_key(d):
    """Deterministic total order on dots of any shipped kind (for reports and dumps)."""
    if d is TOP:
        return (0,)
    if isinstance(d, (int, Fraction)):
        return (1, d)
    if isinstance(d, str):
        return (2, d)
    if isinstance(d, tuple):
        return (3, len(d), tuple(dot_sort_key(x) for x in d))
    if is_dataclass(d):
        return (4, type(d).__name__, tuple(dot_sort_key(getattr(d, f.name)) for f in fields(d)))
    return (5, str(d))


class Space:
    """Contract for a (pre-)natural space given by its basic dots.

    Subclasses implement :meth:`apart`, :meth:`refines` and :attr:`top`.
    Graded spaces also implement :meth:`grd` and :meth:`parents`;
    :meth:`successors` may raise :class:`UnsupportedEnumeration` when a dot
    has infinitely many successors.
    """

    name = "space"

    @property
    def top(self):
        raise NotImplementedError

    def apart(self, a, b) -> bool:
        raise NotImplementedError

    def refines(self, a, b) -> bool:
        raise NotImplementedError

    def grd(self, a) -> int:
        raise UngradedSpace(f"{self.name} has no grading")

    def parents(self, a) -> list:
        """Immediate predecessors of ``a`` (dots ``b`` with ``a`` a successor of ``b``)."""
        raise UngradedSpace(f"{self.name} has no grading")

    def successors(self, a) -> list:
        raise UnsupportedEnumeration(f"{self.name} does not enumerate successors")

    def contains(self, a) -> bool:
        """Whether ``a`` is a valid dot of this space."""
        return True

    def format_dot(self, a) -> str:
        return str(a)

    def relation_matrices(self, dots):
        """Boolean matrices ``(A, R)`` with ``A[i, j] = apart(dots[i], dots[j])`` and
        ``R[i, j] = refines(dots[i], dots[j])``.

        The default evaluates the scalar relations pairwise; spaces with an
        arithmetic description override this with a vectorized kernel.
        """
        n = len(dots)
        A = np.zeros((n, n), dtype=bool)
        R = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(dots):
            for j, b in enumerate(dots):
                A[i, j] = self.apart(a, b)
                R[i, j] = self.refines(a, b)
        return A, R


def touch(space: Space, a, b) -> bool:
    """``a`` touches ``b``: the decidable complement of apartness."""
    return not space.apart(a, b)


def strictly_refines(space: Space, a, b) -> bool:
    return a != b and space.refines(a, b)


class Point:
    """A lazily produced, shrinking stream of dots of ``space``.

    Dots are pulled on demand and cached, so ``p[k]`` is repeatable.  A point
    is a single-consumer cursor: do not pull from it concurrently.

    ``graded`` marks points whose dot at index ``k`` sits at level ``k`` of its
    space, so two graded points can be zipped into a product point directly.
    """

    def __init__(self, space: Space, source: Iterable, *, graded: bool = False, label: str = ""):
        self.space = space
        self._it: Optional[Iterator] = iter(source)
        self._cache: list = []
        self.graded = graded
        self.label = label

    @classmethod
    def from_function(cls, space: Space, fn: Callable[[int], object], **kw) -> "Point":
        def gen():
            k = 0
            while True:
                yield fn(k)
                k += 1

        return cls(space, gen(), **kw)

    def _fill(self, k: int):
        while len(self._cache) <= k:
            if self._it is None:
                raise DepthExhausted(f"point {self.label or ''} ended after {len(self._cache)} dots")
            try:
                self._cache.append(next(self._it))
            except StopIteration:
                self._it = None
                raise DepthExhausted(
                    f"point {self.label or ''} ended after {len(self._cache)} dots"
                ) from None

    def __getitem__(self, k: int):
        if k < 0:
            raise IndexError("points are indexed from 0")
        self._fill(k)
        return self._cache[k]

    def prefix(self, k: int) -> list:
        if k > 0:
            self._fill(k - 1)
        return self._cache[:k]

    def __iter__(self):
        k = 0
        while True:
            yield self[k]
            k += 1

    def __repr__(self):
        shown = ", ".join(self.space.format_dot(d) for d in self._cache[:4])
        more = ", ..." if len(self._cache) > 4 or self._it is not None else ""
        return f"Point({self.label or self.space.name}: {shown}{more})"


@dataclass(frozen=True)
class ApartnessWitness:
    """Index at which two points (or a point and a dot) were seen apart.

    ``left`` and ``right`` are the two dots compared at ``index``.
    """

    index: int
    left: object
    right: object


def points_apart_within(p: Point, q: Point, fuel: int) -> Optional[ApartnessWitness]:
    """Least ``n < fuel`` with ``p[n] # q[n]``, or ``None``.

    ``None`` does not prove the points equivalent; equivalence is not
    finitely observable.
    """
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    space = p.space
    for n in range(fuel):
        a, b = p[n], q[n]
        if space.apart(a, b):
            return ApartnessWitness(n, a, b)
    return None


def point_apart_from_dot(p: Point, a, fuel: int) -> Optional[ApartnessWitness]:
    for n in range(fuel):
        if p.space.apart(p[n], a):
            return ApartnessWitness(n, p[n], a)
    return None


def point_prefix_valid(p: Point, k: int) -> bool:
    """Whether the first ``k`` dots of ``p`` descend strictly."""
    if k < 1:
        raise ValueError("k must be at least 1")
    dots = p.prefix(k)
    return all(strictly_refines(p.space, b, a) for a, b in zip(dots, dots[1:]))


def begins_with(p: Point, a, fuel: int) -> bool:
    """Semi-decide ``p`` begins with ``a``: some ``p[m]``, ``m < fuel``, strictly refines ``a``."""
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    return any(strictly_refines(p.space, p[m], a) for m in range(fuel))
