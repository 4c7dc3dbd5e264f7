from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import vectors
from padicdyn import (INTEGERS, NATURALS, ONE_NORM, BilateralBackwardShift, FinVector, ForwardShift, Identity,
                      LambdaMu, NormExp, PadicField, RightInverseLambdaMu, UnilateralBackwardShift, WeightModel,
                      apply, apply_power, conjugated_weight, operator_norm, right_inverse, right_inverse_apply)
from padicdyn.errors import DivisionByZero, Unsupported, WrongDomain
from padicdyn.ops import weight_at

F = PadicField(5, 64)


def e(i, domain=NATURALS):
    return FinVector.basis(i, domain, F)


def test_weight_lookup():
    a, b, c = F(2), F(3), F(7)
    assert all(weight_at(WeightModel(NATURALS, (), (a,), (), ()), n) == a for n in (1, 5, 99))
    assert weight_at(WeightModel(NATURALS, (a, b), (c,), (), ()), 3) == c
    assert weight_at(WeightModel(INTEGERS, (), (a,), (), (c,)), -7) == c


def test_cyclic_product_matches_loop():
    w = WeightModel.from_values(F, INTEGERS, (2, "1/5"), (3, 5, 7), (11,), ("1/25", 4))
    for lo, hi in ((1, 1), (1, 17), (-9, 4), (-20, -3), (5, 4)):
        direct = F.one
        for t in range(lo, hi + 1):
            direct = direct * w.weight_at(t)
        assert w.product(lo, hi) == direct


def test_apply_examples():
    lam, mu = F(3), F(7)
    assert apply(LambdaMu(lam, mu, NATURALS), e(2)) == mu * e(1) + lam * e(2)
    w = WeightModel.from_values(F, NATURALS, (), (5,))
    assert apply(UnilateralBackwardShift(w), e(1)).is_zero
    wz = WeightModel.from_values(F, INTEGERS, (2, 3), (7,), (11,), (13,))
    for n in (-4, 0, 1, 2, 6):
        assert apply(BilateralBackwardShift(wz), e(n, INTEGERS)) == wz.weight_at(n) * e(n - 1, INTEGERS)


def test_shift_requires_matching_domain():
    with pytest.raises(WrongDomain):
        BilateralBackwardShift(WeightModel.constant(F, NATURALS))


def test_lambda_mu_power_binomial_term():
    op = LambdaMu(F(5), F("1/5"), NATURALS)
    y = apply_power(op, 2, e(3))
    assert y[1] == F("1/25") and y[1].valuation == -2
    assert apply_power(op, 0, e(3)) == e(3)


def test_right_inverse_first_entries():
    lam, mu = F(5), F("1/5")
    y = right_inverse_apply(lam, mu, e(1))
    # (S e_1)_2 = 1/mu; further entries follow the geometric tail (-lambda/mu)^(i-2)/mu
    assert y.coefficient(1).is_zero
    assert y.coefficient(2) == mu.inverse()
    assert y.coefficient(3) == mu.inverse() * (-lam / mu)
    assert right_inverse_apply(F(0), mu, e(1)) == mu.inverse() * e(2)
    with pytest.raises(DivisionByZero):
        right_inverse_apply(lam, F(0), e(1))


@given(vectors(F, NATURALS, hi=50, max_size=10), st.integers(-3, 3), st.integers(-3, 3))
def test_right_inverse_identity(x, a, b):
    lam, mu = F.uniformizer_power(a) * F(2), F.uniformizer_power(b) * F(3)
    assert apply(LambdaMu(lam, mu, NATURALS), right_inverse_apply(lam, mu, x)) == x


@given(vectors(F, NATURALS, max_size=6), st.integers(0, 8))
def test_right_inverse_power_norm_bound(x, n):
    lam, mu = F(5), F("1/5")
    S = RightInverseLambdaMu(lam, mu)
    assert apply_power(S, n, x).sup_norm() <= mu.norm() ** -n * x.sup_norm()


@given(vectors(F, INTEGERS, hi=10), st.integers(0, 25), st.data())
def test_power_equals_iteration_bilateral(x, n, data):
    vals = data.draw(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
    w = WeightModel.from_valuations(F, INTEGERS, vals[:2], vals, vals[1:], vals[::-1])
    for op in (BilateralBackwardShift(w), ForwardShift(w), LambdaMu(F(3), F("2/5"), INTEGERS)):
        y = x
        for _ in range(n):
            y = apply(op, y)
        assert apply_power(op, n, x) == y


def test_forward_shift_right_inverts():
    for dom in (NATURALS, INTEGERS):
        w = WeightModel.from_values(F, dom, (2,), (5, "1/3"), *(((7,), (11,)) if dom is INTEGERS else ()))
        B = BilateralBackwardShift(w) if dom is INTEGERS else UnilateralBackwardShift(w)
        x = FinVector(F, dom, {1: F(4), 3: F("1/5")})
        assert apply(B, apply(right_inverse(B), x)) == x


def test_conjugated_weights():
    c = F(5)
    w = WeightModel.constant(F, INTEGERS, c)
    assert conjugated_weight(w, 0) == F.one
    assert conjugated_weight(w, 4).valuation == -4
    v = WeightModel.from_values(F, INTEGERS, (), (3,), (), (Fraction(2, 7),))
    assert conjugated_weight(v, -1) == v.weight_at(0)


def test_operator_norms():
    assert operator_norm(Identity()) == ONE_NORM
    assert operator_norm(LambdaMu(F(5), F("1/25"), NATURALS)) == NormExp(2)
    assert operator_norm(UnilateralBackwardShift(WeightModel.constant(F, NATURALS))) == ONE_NORM


def test_no_right_inverse_on_integers():
    with pytest.raises(Unsupported):
        right_inverse(LambdaMu(F(1), F(1), INTEGERS))
