"""Graded fragments of treas: grading, successor trails, trail spaces, unglueing."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Space, UngradedSpace, UnsupportedEnumeration, dot_sort_key


class FragmentError(ValueError):
    pass


@dataclass(frozen=True)
class Trail:
    """A strictly descending finite dot sequence; the empty trail is the maximal trail dot."""

    dots: tuple = ()

    @property
    def last(self):
        if not self.dots:
            raise ValueError("the empty trail has no last dot")
        return self.dots[-1]

    def __len__(self):
        return len(self.dots)

    def extends(self, other: "Trail") -> bool:
        return len(other.dots) <= len(self.dots) and self.dots[: len(other.dots)] == other.dots

    def __str__(self):
        return "T[" + " ".join(str(d) for d in self.dots) + "]"


class TrailSpace(Space):
    """Trails over ``base``: refinement is extension, apartness compares last dots."""

    def __init__(self, base: Space):
        self.base = base
        self.name = f"trails({base.name})"

    @property
    def top(self):
        return Trail()

    def refines(self, a: Trail, b: Trail) -> bool:
        return a.extends(b)

    def apart(self, a: Trail, b: Trail) -> bool:
        if not a.dots or not b.dots:
            return False
        return self.base.apart(a.last, b.last)

    def grd(self, a: Trail) -> int:
        return len(a)

    def parents(self, a: Trail) -> list:
        return [Trail(a.dots[:-1])] if a.dots else []

    def format_dot(self, a: Trail) -> str:
        return "T[" + " ".join(self.base.format_dot(d) for d in a.dots) + "]"

    def __eq__(self, other):
        return type(other) is type(self) and other.base == self.base

    def __hash__(self):
        return hash(("trails", self.base))


def trail_relations(t1: Trail, t2: Trail, space: Space):
    """``(apart, t1 refines t2)`` in the trail space over ``space``."""
    ts = TrailSpace(space)
    return ts.apart(t1, t2), ts.refines(t1, t2)


def grd(space: Space, a) -> int:
    return space.grd(a)


class GradedFragment:
    """A finite, predecessor-closed set of dots of a graded space.

    On a predecessor-closed set, immediate predecessors inside the fragment
    coincide with immediate predecessors in the whole space.
    """

    def __init__(self, space: Space, dots: Iterable, *, check: bool = True):
        self.space = space
        self.dots = list(dict.fromkeys(dots))
        self._members = set(self.dots)
        top = space.top
        if top not in self._members:
            raise FragmentError(f"fragment must contain the maximal dot {space.format_dot(top)}")
        self.parents = {}
        self.children = {d: [] for d in self.dots}
        for d in self.dots:
            ps = [] if d == top else list(space.parents(d))
            if d != top and not ps:
                raise FragmentError(f"{space.format_dot(d)} has no predecessor")
            for p in ps:
                if p not in self._members:
                    raise FragmentError(
                        f"not predecessor-closed: {space.format_dot(p)} (parent of {space.format_dot(d)}) missing"
                    )
                self.children[p].append(d)
            self.parents[d] = ps
        self.grade = {}
        if check:
            self._check_grading()
        else:
            self.grade = {d: space.grd(d) for d in self.dots}

    def _check_grading(self):
        space = self.space
        for d in sorted(self.dots, key=space.grd):
            g = space.grd(d)
            if d == space.top:
                if g != 0:
                    raise FragmentError(f"maximal dot has grade {g}")
            else:
                lengths = {self.grade[p] + 1 for p in self.parents[d]}
                if lengths != {g}:
                    raise FragmentError(
                        f"{space.format_dot(d)}: successor trails of lengths {sorted(lengths)} but grd {g}"
                    )
            self.grade[d] = g

    def __contains__(self, d):
        return d in self._members

    def __len__(self):
        return len(self.dots)

    def __iter__(self):
        return iter(self.dots)

    def by_grade(self) -> list:
        return sorted(self.dots, key=lambda d: (self.grade[d], dot_sort_key(d)))

    def is_tree(self) -> bool:
        top = self.space.top
        return all(len(self.parents[d]) == 1 for d in self.dots if d != top)

    def refinement_pairs(self):
        """All pairs ``(a, b)`` in the fragment with ``a`` refining ``b`` (reflexive included)."""
        anc = self.ancestors()
        for a in self.dots:
            for b in anc[a]:
                yield a, b

    def ancestors(self) -> dict:
        anc = {}
        for d in self.by_grade():
            s = {d}
            for p in self.parents[d]:
                s |= anc[p]
            anc[d] = s
        return anc

    def dump(self) -> str:
        """One line per dot: ``grade<TAB>dot<TAB>comma-separated successors``."""
        fmt = self.space.format_dot
        lines = []
        for d in self.by_grade():
            kids = sorted(self.children[d], key=dot_sort_key)
            lines.append(f"{self.grade[d]}\t{fmt(d)}\t{','.join(fmt(k) for k in kids)}")
        return "\n".join(lines) + "\n"


def succ_trails(fragment: GradedFragment, a) -> list:
    """All successor trails from the maximal dot down to ``a`` (maximal dot excluded)."""
    if a not in fragment:
        raise FragmentError(f"{fragment.space.format_dot(a)} is not in the fragment")
    memo = {}

    def walk(d):
        if d in memo:
            return memo[d]
        if d == fragment.space.top:
            out = [()]
        else:
            out = [t + (d,) for p in fragment.parents[d] for t in walk(p)]
        memo[d] = out
        return out

    return sorted((Trail(t) for t in walk(a)), key=dot_sort_key)


def unglue(fragment: GradedFragment) -> GradedFragment:
    """Replace every dot by its successor trails; the result is a tree fragment."""
    space = TrailSpace(fragment.space)
    dots = [t for d in fragment.by_grade() for t in succ_trails(fragment, d)]
    for t in dots:
        if t.dots and fragment.grade[t.dots[0]] != 1:
            raise FragmentError(f"trail {t} does not start at a grade-1 dot")
    return GradedFragment(space, dots)


def is_fann_fragment(fragment: GradedFragment) -> bool:
    """Finitely branching within the space (not just the fragment) and correctly graded."""
    space = fragment.space
    for d in fragment.dots:
        try:
            kids = space.successors(d)
        except UnsupportedEnumeration:
            return False
        if not isinstance(kids, list):
            return False
    try:
        fragment._check_grading()
    except (FragmentError, UngradedSpace):
        return False
    return True


def is_full_subtrea(sub: GradedFragment, full: GradedFragment) -> bool:
    """Every successor pair of ``sub`` is a successor pair of ``full``."""
    for d in sub.dots:
        if d not in full:
            return False
        for p in sub.parents[d]:
            if p not in full.parents[d]:
                return False
    return True
