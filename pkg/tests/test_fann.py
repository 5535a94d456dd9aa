from fractions import Fraction

import pytest

from ntop.axioms import check_axioms
from ntop.core import TOP, DepthExhausted
from ntop.fann import (
    BallDot,
    FannError,
    MetricPresentation,
    branching,
    build_fann,
    cantor_set,
    fann_point_value,
    g_choice,
    gap,
    greedy_chain,
    h_choice,
    level_counts,
    load_presentation,
    parse_presentation,
    single_point,
    unit_interval,
)
from ntop.trees import is_fann_fragment

F = Fraction


def two(k):
    return F(2) ** -k


@pytest.fixture(scope="module")
def unit6():
    pres = unit_interval(6)
    return pres, build_fann(pres, 6)


def test_h_examples():
    pres = unit_interval(3)
    assert h_choice(pres, BallDot(F(0), 3), BallDot(F(1, 8), 1)) == 0
    assert h_choice(pres, BallDot(F(1, 4), 3), BallDot(F(1, 4), 1)) == 0
    assert h_choice(pres, BallDot(F(0), 2), BallDot(F(1), 1)) == 1
    with pytest.raises(ValueError):
        h_choice(pres, BallDot(F(0), 1), BallDot(F(0), 1))


def test_g_examples():
    pres = unit_interval(3)
    assert g_choice(pres, BallDot(F(0), 3), BallDot(F(1), 3)) == 1
    assert g_choice(pres, BallDot(F(0), 3), BallDot(F(0), 3)) == 0
    assert g_choice(pres, BallDot(F(0), 2), BallDot(F(1, 4), 2)) == 0


def test_choice_guarantees_exact(unit6):
    pres, fr = unit6
    balls = [d for d in fr.dots if d is not TOP]
    for a in balls:
        for b in balls:
            dist = abs(a.center - b.center)
            s, t = a.level, b.level
            if s > t:
                if h_choice(pres, a, b) == 0:
                    assert dist < two(t) - two(s)
                else:
                    assert dist > two(t) - two(s) - two(2 * s)
            if g_choice(pres, a, b) == 1:
                assert dist > two(s) + two(t) + two(s + t + 1)
                assert gap(a, b) > 0
            else:
                assert dist < two(s) + two(t) + two(s + t)


def test_unit_interval_fann(unit6):
    pres, fr = unit6
    assert is_fann_fragment(fr)
    assert level_counts(fr) == [5, 9, 17, 33, 65, 129, 257]
    lo, hi, _ = branching(fr)
    assert 1 <= lo and hi <= 7
    for d in fr.dots:
        if d is not TOP and d.level > 0:
            assert all(p.level == d.level - 1 for p in fr.parents[d]) and fr.parents[d]
    assert check_axioms(fr.space, fr.dots).passed


def test_unit_interval_refines_means_nested_balls(unit6):
    _, fr = unit6
    for d in fr.dots:
        if d is TOP or d.level == 0:
            continue
        for p in fr.parents[d]:
            assert abs(d.center - p.center) + d.radius < p.radius


def test_cantor_fann():
    fr = build_fann(cantor_set(5), 5)
    assert is_fann_fragment(fr)
    assert check_axioms(fr.space, fr.dots).passed
    space = fr.space
    # radius-1/2 balls around 0 and 1 overlap the middle; radius-1/4 balls do not
    assert not space.apart(BallDot(F(0), 1), BallDot(F(1), 1))
    assert space.apart(BallDot(F(0), 2), BallDot(F(1), 2))


def test_point_fann_is_a_chain():
    fr = build_fann(single_point(5), 5)
    assert fr.is_tree() and level_counts(fr) == [1] * 6
    assert branching(fr)[1] == 1
    dots = [d for d in fr.dots if d is not TOP]
    assert not any(fr.space.apart(a, b) for a in dots for b in dots)
    p = greedy_chain(fr, 0)
    assert [fann_point_value(fr.space.pres, p, k) for k in range(6)] == [0] * 6
    with pytest.raises(DepthExhausted):
        p[6]


def test_greedy_values_converge(unit6):
    pres, fr = unit6
    p = greedy_chain(fr, F(1, 2))
    for k in range(7):
        assert abs(fann_point_value(pres, p, k) - F(1, 2)) <= two(k - 1)
    p = greedy_chain(fr, F(1, 3))
    for k in range(7):
        assert abs(fann_point_value(pres, p, k) - F(1, 3)) <= two(k + 2) + two(k)


def test_greedy_chain_is_a_descending_path(unit6):
    _, fr = unit6
    p = greedy_chain(fr, F(5, 7))
    for k in range(6):
        assert fr.space.refines(p[k + 1], p[k]) and p[k + 1] != p[k]
    for j in range(7):
        for l in range(7):
            vj, vl = p[j].center, p[l].center
            assert abs(vj - vl) <= two(min(j, l)) + two(max(j, l))


def test_net_violation_names_level():
    pres = unit_interval(3)
    pres.levels[2] = pres.levels[2] + [F(5)]
    with pytest.raises(FannError, match="level 2"):
        build_fann(pres, 3)


def test_orphan_is_reported():
    # an oracle that only tells the truth at the precision the net check uses
    def dist(a, b, prec):
        return F(0) if prec >= 5 else F(1)

    pres = MetricPresentation([["a"], ["b"]], dist, name="liar")
    with pytest.raises(FannError, match="orphan"):
        build_fann(pres, 1)


def test_refine_apart_conflict_aborts():
    table = "levels=3\na\nb\nc\na b 0\nb c 0\na c 5\n"
    with pytest.raises(FannError, match="judged apart"):
        build_fann(parse_presentation(table), 2)


def test_missing_levels():
    with pytest.raises(FannError, match="levels"):
        build_fann(unit_interval(2), 4)


def test_parse_exact_rational_file(tmp_path):
    path = tmp_path / "half.txt"
    path.write_text("levels=2\n# two nets\n0 1/2 1\n0 1/4 1/2 3/4 1\ndistance=exact-rational\n")
    pres = load_presentation(str(path), 1)
    fr = build_fann(pres, 1)
    assert level_counts(fr) == [3, 5]
    assert pres.value(pres.levels[1][1]) == F(1, 4)


def test_parse_table():
    pres = parse_presentation("levels=2\nx\nx y\nx y 1/8\n")
    fr = build_fann(pres, 1)
    assert level_counts(fr) == [1, 2]
    assert pres.value is None


@pytest.mark.parametrize(
    "text, msg",
    [
        ("", "levels=L"),
        ("levels=two\na\n", "header"),
        ("levels=2\na\n", "level lines"),
        ("levels=1\na b\na b\n", "bad distance line"),
        ("levels=1\na b\na b -1\n", "negative"),
        ("levels=1\na b\ndistance=exact-rational\n", "rational center labels"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(FannError, match=msg):
        parse_presentation(text)


def test_missing_table_entry():
    pres = parse_presentation("levels=2\na\na b\n")
    with pytest.raises(FannError, match="no entry"):
        build_fann(pres, 1)


def test_builtin_and_missing_file():
    assert load_presentation("point", 2).name == "point"
    with pytest.raises(FannError, match="cannot read"):
        load_presentation("/no/such/file", 2)
