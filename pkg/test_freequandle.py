from fractions import Fraction

import pytest

from rackgeom.core.errors import CapExceeded, DifferentComponents, InvalidArgument, ParseError
from rackgeom.models.freequandle import FQElement
from rackgeom.services.freequandle_service import freequandle_service as fq
from rackgeom.services.freequandle_service import inverse, reduce

X, Y = 1, 2


def element(word, generator):
    return fq.canonical(word, generator)


# === Words and canonical forms ===


def test_reduce():
    assert reduce((X, Y, -Y)) == (X,)
    assert reduce(()) == ()
    assert reduce((X, X, X)) == (X, X, X)
    assert reduce((X, Y, -Y, -X, Y)) == (Y,)
    assert reduce(reduce((Y, -X, X, X))) == reduce((Y, -X, X, X))
    assert inverse((X, -Y)) == (Y, -X)


def test_canonical():
    assert element((X,), X) == FQElement(conjugator=(), generator=X)
    assert element((Y,), X).conjugator == (Y,)
    assert element((Y, X), X).conjugator == (Y,)
    assert element((Y, -X, -X), X).conjugator == (Y,)
    assert element((X, Y), Y).conjugator == (X,)


def test_operation_examples():
    x, y = fq.basepoint(X), fq.basepoint(Y)
    assert fq.fq_op(x, y) == element((X,), Y)
    assert fq.fq_op(x, x) == x
    assert fq.fq_op(y, fq.fq_op(y, x)) == element((Y, Y), X)


@pytest.mark.parametrize("radius, conj_len", [(1, 1), (2, 0)])
def test_quandle_axioms_on_a_ball(radius, conj_len):
    sample = list(fq.ball(2, radius=radius, conj_len=conj_len))
    for a in sample:
        assert fq.fq_op(a, a) == a
        for b in sample:
            ab = fq.fq_op(a, b)
            assert fq.fq_inverse_op(a, ab) == b
            for c in sample:
                assert fq.fq_op(a, fq.fq_op(b, c)) == fq.fq_op(ab, fq.fq_op(a, c))


# === Balls ===


def test_ball_of_radius_zero():
    assert set(fq.ball(2, radius=0, conj_len=0)) == {fq.basepoint(X), fq.basepoint(Y)}


def test_ball_of_radius_one_around_x():
    ball = fq.ball(2, radius=1, conj_len=0, basepoints=[fq.basepoint(X)])
    assert set(ball) == {fq.basepoint(X), element((Y,), X), element((-Y,), X)}
    assert ball[element((Y,), X)] == 1


def test_ball_sizes_strictly_increase():
    sizes = [len(fq.ball(2, radius=r, conj_len=0)) for r in range(5)]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_ball_cap():
    with pytest.raises(CapExceeded):
        fq.ball(2, radius=4, conj_len=2, cap=1000)


def test_ball_limits():
    with pytest.raises(InvalidArgument):
        fq.ball(2, radius=7, conj_len=0)
    with pytest.raises(InvalidArgument):
        fq.ball(2, radius=1, conj_len=9)
    with pytest.raises(InvalidArgument):
        fq.ball(0, radius=1, conj_len=0)


def test_movers():
    movers = fq.movers(2, 1)
    assert len(movers) == 6
    assert all(len(m.conjugator) <= 1 for m in movers)


# === Distances ===


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_distance_to_y_power(n):
    """d((1, x), (y^n, x)) = n, BFS meeting the abelian bound."""
    bracket = fq.fq_distance(fq.basepoint(X), element((Y,) * n, X))
    assert bracket.exact
    assert bracket.lower == bracket.upper == n


@pytest.mark.parametrize("conj_len", [0, 1])
def test_distance_with_small_movers(conj_len):
    bracket = fq.fq_distance(fq.basepoint(X), element((Y, Y, Y), X), conj_len=conj_len)
    assert (bracket.lower, bracket.upper, bracket.exact) == (3, 3, True)


def test_distance_to_self():
    a = element((Y, X, Y), X)
    bracket = fq.fq_distance(a, a)
    assert bracket.exact and bracket.upper == 0


def test_distance_across_components():
    with pytest.raises(DifferentComponents):
        fq.fq_distance(fq.basepoint(X), fq.basepoint(Y))


def test_distance_bracket_when_search_is_short():
    bracket = fq.fq_distance(fq.basepoint(X), element((Y,) * 5, X), radius=2, conj_len=0)
    assert bracket.lower == 5
    assert bracket.upper is None
    assert not bracket.exact


def test_abelian_lower_bound():
    x = fq.basepoint(X)
    assert fq.abelian_lower_bound(x, element((Y, Y, Y), X)) == 3
    assert fq.abelian_lower_bound(x, FQElement(conjugator=(X,) * 5, generator=X)) == 0
    assert fq.abelian_lower_bound(x, element((Y, X, Y), X)) == 2


def test_abelian_bound_below_certified_distances():
    x = fq.basepoint(X)
    for b in fq.ball(2, radius=2, conj_len=1, basepoints=[x]):
        bracket = fq.fq_distance(x, b, radius=4, conj_len=1)
        if bracket.upper is not None:
            assert bracket.lower <= bracket.upper


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_component_diameter_grows(r):
    assert fq.component_lower_diameter(2, radius=r, conj_len=0) >= r


# === Quasimorphisms ===


def test_hat_phi_examples():
    assert fq.hat_phi(fq.basepoint(X)) == 0
    assert fq.hat_phi(element((X, Y) * 3, X)) == 3
    assert fq.hat_phi(element((Y,) * 5, X)) == 0


def test_hat_phi_unbounded_on_a_component():
    for m in range(7):
        assert fq.hat_phi(element((X, Y) * m, X)) == m


def test_hat_phi_defect_on_the_standard_sample():
    sample = fq.ball(2, radius=4, conj_len=1)
    movers = fq.movers(2, 2)
    assert len(sample) == 14930
    assert fq.quasimorphism_defect(fq.hat_phi, sample, movers) == 2


def test_zero_function_has_no_defect():
    sample = fq.ball(2, radius=1, conj_len=1)
    assert fq.quasimorphism_defect(lambda a: Fraction(0), sample, fq.movers(2, 1)) == 0


def test_abelian_distance_bound_is_one_lipschitz():
    x = fq.basepoint(X)
    sample = fq.ball(2, radius=2, conj_len=1, basepoints=[x])
    defect = fq.quasimorphism_defect(lambda b: fq.abelian_lower_bound(x, b), sample, fq.movers(2, 2))
    assert defect == 1


def test_brooks_counting():
    assert fq.brooks_counting((X, Y, X, Y), (X, Y)) == 2
    assert fq.brooks_counting((-Y, -X), (X, Y)) == -1
    assert fq.hat_brooks(element((X, Y) * 2, X), (X, Y)) == 2
    with pytest.raises(InvalidArgument):
        fq.brooks_counting((X,), ())


# === Text syntax ===


def test_parse_element():
    expected = element((Y, Y, Y), X)
    assert fq.parse_element("yyy@x") == expected
    assert fq.parse_element("y^3@x") == expected
    assert fq.parse_element("xY @ x").conjugator == (X, -Y)
    assert fq.parse_element("x^2 y^-2@y").conjugator == (X, X)
    assert fq.parse_element("1@y") == fq.basepoint(Y)


def test_format_element():
    assert fq.format_element(element((Y, Y, Y), X)) == "y^3@x"
    assert fq.format_element(fq.basepoint(X)) == "1@x"
    assert fq.format_element(element((X, -Y, -Y), X)) == "xy^-2@x"
    for text in ["yyy@x", "xYxY@y", "x^4 Y@x"]:
        a = fq.parse_element(text)
        assert fq.parse_element(fq.format_element(a)) == a


@pytest.mark.parametrize("text, col", [("yy", 1), ("q@x", 1), ("y@q", 3), ("y^@x", 2)])
def test_parse_errors(text, col):
    with pytest.raises(ParseError) as exc:
        fq.parse_element(text)
    assert exc.value.col == col
