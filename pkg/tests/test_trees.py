import random

import pytest

from ntop.axioms import check_axioms
from ntop.core import TOP
from ntop.spaces import (
    BINARY,
    CANTOR,
    SIGMA_R,
    SIGMA_UNIT,
    Lean,
    NAry,
    baire_dots,
    nary_dots,
    sigma_r_dots,
    sigma_unit_dots,
)
from ntop.trees import (
    FragmentError,
    GradedFragment,
    Trail,
    TrailSpace,
    grd,
    is_fann_fragment,
    is_full_subtrea,
    succ_trails,
    trail_relations,
    unglue,
)


def sigma_r_fragment(depth, window=4):
    return GradedFragment(SIGMA_R, sigma_r_dots(depth, window=window))


def test_grd_helper():
    assert grd(SIGMA_R, TOP) == 0
    assert grd(CANTOR, (1, 0, 1)) == 3


def test_succ_trails_two_routes_into_one_two():
    fr = sigma_r_fragment(2)
    trails = succ_trails(fr, Lean(2, 1))
    assert trails == [Trail((Lean(0, 0), Lean(2, 1))), Trail((Lean(1, 0), Lean(2, 1)))]
    assert succ_trails(fr, TOP) == [Trail(())]
    with pytest.raises(FragmentError):
        succ_trails(fr, Lean(100, 0))


def test_succ_trails_in_binary_tree():
    fr = GradedFragment(BINARY, nary_dots(2, 4))
    for d in fr.dots:
        assert len(succ_trails(fr, d)) == 1


def test_trail_lengths_equal_grade():
    fr = sigma_r_fragment(3)
    for d in fr.dots:
        trails = succ_trails(fr, d)
        assert trails and {len(t) for t in trails} == {fr.grade[d]}


def test_unglue_depth_two():
    fr = sigma_r_fragment(2)
    tree = unglue(fr)
    assert tree.is_tree()
    copies = [t for t in tree.dots if t.dots and t.last == Lean(2, 1)]
    assert copies == [Trail((Lean(0, 0), Lean(2, 1))), Trail((Lean(1, 0), Lean(2, 1)))]
    for d in fr.dots:
        n = sum(1 for t in tree.dots if (t.dots and t.last == d) or (not t.dots and d is TOP))
        assert n == len(succ_trails(fr, d))
        for t in tree.dots:
            if t.dots and t.last == d:
                assert tree.grade[t] == fr.grade[d]


def test_unglue_tree_is_bijective():
    fr = GradedFragment(BINARY, nary_dots(2, 4))
    tree = unglue(fr)
    assert len(tree) == len(fr)
    assert {t.last for t in tree.dots if t.dots} | {TOP} == set(fr.dots)


def test_unglue_projection_gives_descending_dots():
    rng = random.Random(7)
    tree = unglue(sigma_r_fragment(4, window=6))
    leaves = [t for t in tree.dots if len(t) == 5]
    for t in rng.sample(leaves, 30):
        chain = list(t.dots)
        for a, b in zip(chain, chain[1:]):
            assert SIGMA_R.refines(b, a) and a != b
    # extend a random trail down to depth 8 through successors
    d = Lean(0, 0)
    chain = [d]
    while d.m < 8:
        d = rng.choice(SIGMA_R.successors(d))
        chain.append(d)
    assert all(SIGMA_R.refines(b, a) and a != b for a, b in zip(chain, chain[1:]))


def test_trail_relations():
    a = Trail((Lean(0, 0),))
    b = Trail((Lean(0, 0), Lean(2, 1)))
    apart, refines = trail_relations(b, a, SIGMA_R)
    assert refines and not apart
    c = Trail((Lean(0, 0), Lean(0, 1)))  # ends at [0,1]
    d = Trail((Lean(1, 0), Lean(3, 1)))  # ends at [3/2,5/2]
    assert trail_relations(c, d, SIGMA_R) == (True, False)
    assert trail_relations(Trail(), d, SIGMA_R) == (False, False)
    assert trail_relations(d, Trail(), SIGMA_R) == (False, True)


def test_trail_space_axioms_exhaustive():
    tree = unglue(sigma_r_fragment(3, window=3))
    report = check_axioms(TrailSpace(SIGMA_R), tree.dots)
    assert report.passed, report.lines()


def test_is_fann_fragment():
    assert is_fann_fragment(GradedFragment(SIGMA_UNIT, sigma_unit_dots(6)))
    assert not is_fann_fragment(sigma_r_fragment(2))
    assert is_fann_fragment(GradedFragment(CANTOR, baire_dots(6, 2)))


def test_fragment_errors():
    with pytest.raises(FragmentError):
        GradedFragment(SIGMA_R, [Lean(0, 0)])
    with pytest.raises(FragmentError):
        GradedFragment(SIGMA_R, [TOP, Lean(0, 1)])


def test_full_subtrea():
    full = GradedFragment(SIGMA_UNIT, sigma_unit_dots(4))
    sub = GradedFragment(SIGMA_UNIT, sigma_unit_dots(2))
    assert is_full_subtrea(sub, full)
    assert not is_full_subtrea(full, sub)


def test_dump_golden():
    fr = GradedFragment(SIGMA_UNIT, sigma_unit_dots(1))
    assert fr.dump() == (
        "0\tD(0,1)\tD(0,2),D(1,2),D(2,2)\n"
        "1\tD(0,2)\t\n"
        "1\tD(1,2)\t\n"
        "1\tD(2,2)\t\n"
    )
    fr = GradedFragment(BINARY, [TOP, NAry(2, 0, 0), NAry(2, 1, 1), NAry(2, 0, 1)])
    assert fr.dump().splitlines()[1] == "1\tN(2,0,0)\tN(2,0,1),N(2,1,1)"
