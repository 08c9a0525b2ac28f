from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from basicvar.polyring import (
    EvaluationError, NilpotencyError, Point, Poly, RatFn, as_ratfn, cartan_weight_action,
    evaluate, minor_poly, poisson, theta_generic, weight_of,
)
from basicvar.roots import Root, positive_roots
from basicvar.weyl import MinorSpec

from strategies import points, polys


def x(i, j):
    return Poly.var((i, j))


F84 = x(8, 4) * x(4, 1) + x(8, 3) * x(3, 1)


def test_arithmetic_examples():
    assert x(2, 1) + x(2, 1) == 2 * x(2, 1)
    assert (x(2, 1) / x(3, 1)) * x(3, 1) == x(2, 1)
    assert ((x(2, 1) / x(3, 1)) * x(3, 1)).is_poly()
    assert F84 - x(4, 1) * x(8, 4) == x(3, 1) * x(8, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        x(2, 1) / Poly()


def test_text_format():
    assert str(F84) == "x[8,4]*x[4,1] + x[8,3]*x[3,1]"
    assert str(x(2, 1) ** 2 * Fraction(-1, 2) + 3) == "-1/2*x[2,1]^2 + 3"
    assert str(Poly()) == "0"


def test_json_round_trip():
    data = F84.to_json()
    assert data[0] == {"coeff": "1", "vars": [[4, 1, 1], [8, 4, 1]]}
    assert Poly.from_json(data) == F84


def test_leading_term_is_lex_in_root_order():
    mono, coeff = F84.leading_term()
    assert dict(mono) == {Root(4, 1): 1, Root(8, 4): 1} and coeff == 1


def test_ratfn_normalisation():
    f = RatFn(2 * x(2, 1), -4 * x(3, 1))
    assert f == -x(2, 1) / (2 * x(3, 1))
    assert f.den_factors == {x(3, 1): 1}
    g = (x(2, 1) * F84) / F84
    assert g.is_poly() and g.to_poly() == x(2, 1)


def test_bracket_examples():
    assert poisson(x(3, 2), x(2, 1)) == x(3, 1)
    assert poisson(x(2, 1), x(3, 2)) == -x(3, 1)
    assert poisson(x(3, 2), x(2, 1) * x(2, 1)) == 2 * x(3, 1) * x(2, 1)
    # indices leaving the strictly lower triangle are dropped
    assert poisson(x(3, 1), x(2, 1)) == Poly()


def test_cartan_action_on_f84():
    # x84 x41 and x83 x31 both carry weight e8 - e1
    assert cartan_weight_action(8, F84) == -F84
    assert cartan_weight_action(1, F84) == F84
    assert cartan_weight_action(4, F84) == Poly()
    assert cartan_weight_action(2, F84) == Poly()
    assert weight_of(F84) == {8: 1, 1: -1}
    assert weight_of(x(2, 1) + x(3, 1)) is None


def test_cartan_action_on_ratfn():
    f = x(8, 4) + x(8, 2) * x(2, 1) / x(4, 1)
    assert weight_of(f) == {8: 1, 4: -1}
    assert cartan_weight_action(4, f) == f
    assert cartan_weight_action(8, f) == -f


def test_minor_examples():
    spec = MinorSpec((5, 7, 8), (2, 3, 4))
    m = minor_poly(spec, False, 8)
    expected = (
        x(5, 2) * (x(7, 3) * x(8, 4) - x(7, 4) * x(8, 3))
        - x(5, 3) * (x(7, 2) * x(8, 4) - x(7, 4) * x(8, 2))
        + x(5, 4) * (x(7, 2) * x(8, 3) - x(7, 3) * x(8, 2))
    )
    assert m == expected
    assert minor_poly(MinorSpec((4,), (1,)), True, 4) == x(4, 1)
    assert minor_poly(MinorSpec((4,), (1,)), False, 4) == x(4, 1)
    assert minor_poly(MinorSpec((2,), (2,)), True, 4) == Poly.const(1)
    assert minor_poly(MinorSpec((2, 3), (1, 2)), True, 3) == x(2, 1) * x(3, 2) - x(3, 1)
    with pytest.raises(ValueError):
        MinorSpec((1, 2), (1,))
    with pytest.raises(ValueError):
        minor_poly(MinorSpec((4,), (1,)), False, 3)


def test_evaluate_examples():
    assert evaluate(x(4, 1), Point(4, {(4, 1): 5})) == 5
    base = Point(8, {(4, 1): 1, (7, 2): 1, (8, 3): 1, (5, 4): 1})
    assert evaluate(F84, base) == 0
    with pytest.raises(EvaluationError):
        evaluate(x(2, 1) / x(3, 1), Point(3, {(2, 1): 1}))


def test_point_rejects_upper_entries():
    with pytest.raises(ValueError):
        Point(3, {(1, 2): 1})


def test_theta_generic_examples():
    p, q = x(4, 3), x(3, 1) / x(4, 1)
    assert theta_generic(p, q, p) == p
    assert theta_generic(p, q, x(6, 5)) == x(6, 5)
    # p = x_(s,a), q = x_(a,t)/x_xi acting on x_(a,b) with s=4, t=1, a=3, b=2
    assert theta_generic(p, q, x(3, 2)) == x(3, 2) - x(3, 1) * x(4, 2) / x(4, 1)
    assert poisson(p, theta_generic(p, q, x(3, 2))) == RatFn(Poly())


def test_theta_generic_guard():
    # {x32, x21^3} needs three bracket steps to vanish
    with pytest.raises(NilpotencyError):
        theta_generic(x(3, 2), as_ratfn(x(2, 1)), x(2, 1) ** 3, max_steps=1)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_poisson_axioms(f, g, h):
    assert poisson(f, g) == -poisson(g, f)
    assert poisson(f, g * h) == poisson(f, g) * h + g * poisson(f, h)
    jac = poisson(f, poisson(g, h)) + poisson(g, poisson(h, f)) + poisson(h, poisson(f, g))
    assert jac == Poly()


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.integers(1, 4))
def test_cartan_is_graded_derivation(f, g, a):
    assert cartan_weight_action(a, f * g) == cartan_weight_action(a, f) * g + f * cartan_weight_action(a, g)
    lhs = cartan_weight_action(a, poisson(f, g))
    rhs = poisson(cartan_weight_action(a, f), g) + poisson(f, cartan_weight_action(a, g))
    assert lhs == rhs


@settings(max_examples=80, deadline=None)
@given(polys(), polys(), points())
def test_evaluate_is_homomorphism(f, g, values):
    X = Point(4, values)
    assert evaluate(f * g, X) == evaluate(f, X) * evaluate(g, X)
    assert evaluate(f + g, X) == evaluate(f, X) + evaluate(g, X)


@settings(max_examples=80, deadline=None)
@given(polys(), polys(), points())
def test_ratfn_evaluation(f, g, values):
    X = Point(4, values)
    if evaluate(g, X) == 0 or g.is_zero():
        return
    assert evaluate(f / g, X) == evaluate(f, X) / evaluate(g, X)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_minor_shift_immaterial_below_diagonal(data):
    n = 7
    size = data.draw(st.integers(1, 3))
    cols = sorted(data.draw(st.lists(st.integers(1, 3), min_size=size, max_size=size, unique=True)))
    rows = sorted(data.draw(st.lists(st.integers(4, n), min_size=size, max_size=size, unique=True)))
    spec = MinorSpec(tuple(rows), tuple(cols))
    assert minor_poly(spec, True, n) == minor_poly(spec, False, n)


def test_all_variables_enumerated():
    assert len(positive_roots(6)) == 15
