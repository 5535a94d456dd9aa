"""Exhaustive check of the pre-natural space axioms on a finite list of dots.

The five axioms: relations decidable (total, boolean-valued); apartness
symmetric; apartness antireflexive; apartness monotone under refinement
(``a <= b`` and ``c # b`` imply ``c # a``); refinement a partial order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Space

AXIOMS = ("decidable", "symmetric", "antireflexive", "monotone", "partial-order")

_CHUNK = 2048


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    counterexample: Optional[tuple] = None
    detail: str = ""


@dataclass
class AxiomReport:
    space: str
    n_dots: int
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def lines(self, fmt=str) -> list:
        out = []
        for r in self.results:
            line = f"{r.axiom:<14} {'PASS' if r.passed else 'FAIL'}"
            if r.counterexample is not None:
                line += "  counterexample: " + " ".join(fmt(d) for d in r.counterexample)
            if r.detail:
                line += f"  ({r.detail})"
            out.append(line)
        return out


def _decidable(space, dots, sample=64):
    step = max(1, len(dots) // sample)
    picked = dots[::step][:sample]
    for a in picked:
        for b in picked:
            for rel in (space.apart, space.refines):
                try:
                    value = rel(a, b)
                except Exception as exc:  # any failure means the relation is not total
                    return AxiomResult("decidable", False, (a, b), f"{rel.__name__} raised {exc!r}")
                if not isinstance(value, (bool, np.bool_)):
                    return AxiomResult("decidable", False, (a, b), f"{rel.__name__} returned {value!r}")
    return AxiomResult("decidable", True, detail=f"{len(picked)}^2 sampled pairs")


def _first_true(mask):
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def check_axioms(space: Space, dots: list) -> AxiomReport:
    dots = list(dict.fromkeys(dots))
    report = AxiomReport(space.name, len(dots))
    report.results.append(_decidable(space, dots))

    try:
        A, R = space.relation_matrices(dots)
    except Exception as exc:  # a relation that cannot be tabulated decides nothing else
        for axiom in AXIOMS[1:]:
            report.results.append(AxiomResult(axiom, False, None, f"not evaluated: {exc!r}"))
        return report
    n = len(dots)

    bad = _first_true(A != A.T)
    report.results.append(
        AxiomResult("symmetric", bad is None, None if bad is None else (dots[bad[0]], dots[bad[1]]))
    )

    diag = np.flatnonzero(np.diagonal(A))
    report.results.append(
        AxiomResult("antireflexive", len(diag) == 0, None if len(diag) == 0 else (dots[diag[0]],))
    )

    # refinement pairs (a, b) with a <= b, as index arrays
    ra, rb = np.nonzero(R)
    AT = np.ascontiguousarray(A.T)  # AT[b, c] = apart(c, b)
    mono_bad = None
    for s in range(0, len(ra), _CHUNK):
        ia, ib = ra[s : s + _CHUNK], rb[s : s + _CHUNK]
        viol = AT[ib] & ~AT[ia]  # c # b but not c # a
        hit = _first_true(viol)
        if hit is not None:
            k, c = hit
            mono_bad = (dots[ia[k]], dots[ib[k]], dots[c])
            break
    report.results.append(
        AxiomResult("monotone", mono_bad is None, mono_bad, "" if mono_bad is None else "a <= b, c # b, not c # a")
    )

    po_bad, why = None, ""
    nonrefl = np.flatnonzero(~np.diagonal(R))
    if len(nonrefl):
        po_bad, why = (dots[nonrefl[0]],), "not reflexive"
    if po_bad is None:
        both = R & R.T
        np.fill_diagonal(both, False)
        hit = _first_true(both)
        if hit is not None:
            po_bad, why = (dots[hit[0]], dots[hit[1]]), "not antisymmetric"
    if po_bad is None:
        # transitivity: a <= b implies every ancestor of b is an ancestor of a
        for s in range(0, len(ra), _CHUNK):
            ia, ib = ra[s : s + _CHUNK], rb[s : s + _CHUNK]
            hit = _first_true(R[ib] & ~R[ia])
            if hit is not None:
                k, c = hit
                po_bad, why = (dots[ia[k]], dots[ib[k]], dots[c]), "not transitive"
                break
    report.results.append(AxiomResult("partial-order", po_bad is None, po_bad, why))
    report.n_refinement_pairs = len(ra)
    report.n_pairs = n * n
    return report


class FaultyApartness(Space):
    """Test hook: wraps a space and breaks symmetry of apartness on one ordered pair."""

    def __init__(self, inner: Space, a, b):
        self.inner = inner
        self.pair = (a, b)
        self.name = f"{inner.name}+fault"

    @property
    def top(self):
        return self.inner.top

    def apart(self, a, b) -> bool:
        if (a, b) == self.pair:
            return not self.inner.apart(a, b)
        return self.inner.apart(a, b)

    def refines(self, a, b) -> bool:
        return self.inner.refines(a, b)

    def relation_matrices(self, dots):
        A, R = self.inner.relation_matrices(dots)
        a, b = self.pair
        if a in dots and b in dots:
            i, j = dots.index(a), dots.index(b)
            A[i, j] = not A[i, j]
        return A, R

    def grd(self, a):
        return self.inner.grd(a)

    def parents(self, a):
        return self.inner.parents(a)

    def format_dot(self, a):
        return self.inner.format_dot(a)


SUITES = ("sigmaR", "sigma01", "binary", "ternary", "decimal", "baire", "cantor", "product:sigmaR")


def standard_fragment(name: str, depth: int):
    """``(space, dots)`` for one of the named suites at the given depth."""
    from . import spaces as sp

    if depth < 0:
        raise ValueError("depth must be a natural number")
    if name == "sigmaR":
        return sp.SIGMA_R, sp.sigma_r_dots(depth, window=lambda m: 1 << (m + 3))
    if name == "sigma01":
        return sp.SIGMA_UNIT, sp.sigma_unit_dots(depth)
    bases = {"binary": sp.BINARY, "ternary": sp.TERNARY, "decimal": sp.DECIMAL}
    if name in bases:
        space = bases[name]
        return space, sp.nary_dots(space.base, depth)
    if name == "baire":
        return sp.Baire(alphabet=3), sp.baire_dots(depth, 3)
    if name == "cantor":
        return sp.CANTOR, sp.baire_dots(depth, 2)
    if name == "product:sigmaR":
        factor = sp.sigma_r_dots(depth, window=16)
        return sp.SIGMA_R2, sp.product_dots(sp.SIGMA_R2, factor, factor)
    raise KeyError(name)
