from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from corpus import FIXTURES
from paramodular_level.padic import valuation
from paramodular_level.weierstrass import (
    IDENTITY,
    Curve,
    NonIntegralModel,
    SingularCurve,
    Transformation,
    invariants,
    is_minimal_at,
    minimize,
    transform,
    transform_coefficients,
)

coeff = st.integers(min_value=-10**6, max_value=10**6)
small = st.integers(min_value=-5, max_value=5)
curves = st.tuples(coeff, coeff, coeff, coeff, coeff)
transforms = st.tuples(
    st.integers(min_value=1, max_value=6).map(lambda u: u * (-1) ** u), small, small, small
)


def test_fixture_invariants():
    for name, f in FIXTURES.items():
        inv = invariants(Curve(*f["ainvs"]))
        assert (inv.disc, inv.c4, inv.c6) == (f["disc"], f["c4"], f["c6"]), name
    assert invariants(Curve(0, 0, 1, -1, 0)).j == Fraction(110592, 37)


def test_singular_rejected():
    with pytest.raises(SingularCurve):
        invariants(Curve(0, 0, 0, 0, 0))
    with pytest.raises(SingularCurve):
        invariants(Curve(0, 0, 0, -3, 2))  # node at (1, 0)


def test_from_list_checks_arity_and_types():
    assert Curve.from_list([0, 0, 1, -1, 0]).ainvs == (0, 0, 1, -1, 0)
    with pytest.raises(ValueError):
        Curve.from_list([1, 2, 3])
    with pytest.raises(TypeError):
        Curve.from_list([0, 0, 1, -1, 0.5])


@given(curves)
def test_invariant_identities(a):
    b2 = a[0] ** 2 + 4 * a[1]
    b4 = 2 * a[3] + a[0] * a[2]
    b6 = a[2] ** 2 + 4 * a[4]
    c = Curve(*a)
    try:
        inv = invariants(c)
    except SingularCurve:
        return
    assert (inv.b2, inv.b4, inv.b6) == (b2, b4, b6)
    assert inv.c4**3 - inv.c6**2 == 1728 * inv.disc
    assert 4 * inv.b8 == inv.b2 * inv.b6 - inv.b4**2


@given(st.tuples(small, small, small, small, small), transforms)
def test_transform_scales_invariants(a, t):
    u, r, s, tt = t
    tr = Transformation(Fraction(1, u), r, s, tt)
    c = Curve(*a)
    try:
        inv = invariants(c)
    except SingularCurve:
        return
    new = invariants(transform(c, tr))
    assert new.c4 == inv.c4 * u**4
    assert new.c6 == inv.c6 * u**6
    assert new.disc == inv.disc * u**12
    assert new.j == inv.j


@given(transforms, transforms, st.tuples(small, small, small, small, small))
def test_compose_and_inverse(t1, t2, a):
    f, g = Transformation(*t1), Transformation(*t2)
    step = transform_coefficients(transform_coefficients(a, f), g)
    assert transform_coefficients(a, f.compose(g)) == step
    assert f.compose(f.inverse()) == IDENTITY
    assert f.inverse().compose(f) == IDENTITY
    assert transform_coefficients(transform_coefficients(a, f), f.inverse()) == tuple(map(Fraction, a))


def test_non_integral_transform_rejected():
    with pytest.raises(NonIntegralModel):
        transform(Curve(0, 0, 1, -1, 0), Transformation(2, 0, 0, 0))


def test_minimize_examples():
    m, tr = minimize(Curve(0, 0, 0, -16, 0))
    assert m == Curve(0, 0, 0, -1, 0) and tr.u == 2
    m, tr = minimize(Curve(0, 0, 0, -81 * 16 * 81, 0))
    assert abs(tr.u) == 18
    assert valuation(invariants(m).disc, 2) < 12 and valuation(invariants(m).disc, 3) < 12
    assert minimize(Curve(0, -1, 1, -10, -20)) == (Curve(0, -1, 1, -10, -20), IDENTITY)


@given(st.tuples(small, small, small, small, small), st.sampled_from([2, 3, 5]), small, small, small)
def test_scaled_model_minimizes_back(a, p, r, s, t):
    c = Curve(*a)
    try:
        inv = invariants(c)
    except SingularCurve:
        return
    assume(all(valuation(inv.disc, q) < 12 for q in (2, 3, 5)))
    big = transform(c, Transformation(Fraction(1, p), r, s, t))
    assert not is_minimal_at(big, p)
    m, tr = minimize(big)
    mi = invariants(m)
    assert abs(mi.disc) == abs(inv.disc)
    assert mi.j == inv.j
    assert transform(big, tr) == m
