from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_rationals, primes, vp
from padicdyn import ONE_NORM, ZERO, NormExp, PadicField
from padicdyn.errors import DivisionByZero, PrecisionExhausted
from padicdyn.field import binomial, from_rational, norm


def test_rejects_composite_modulus():
    with pytest.raises(ValueError):
        PadicField(4)


def test_carry_raises_valuation():
    F = PadicField(5, 8)
    s = F(5) + F(20)
    assert s.valuation == 2 and s == F(25)


def test_unequal_valuations_give_max():
    F = PadicField(5)
    s = F(2) + F(125)
    assert s.valuation == 0 and s.norm() == ONE_NORM


def test_inverse_of_uniformizer():
    F = PadicField(5)
    assert F(5).inverse().valuation == -1
    assert F(5).inverse().norm() == NormExp(1)


def test_from_rational_examples():
    F = PadicField(5, 64)
    assert from_rational(F, 25, 1).valuation == 2
    x = from_rational(F, 1, 5)
    assert x.valuation == -1 and norm(x) == NormExp(1)
    y = from_rational(F, 7, 3)
    assert y.valuation == 0
    assert (3 * y.unit - 7) % 5 ** 64 == 0
    assert norm(from_rational(F, 1, 25)) == NormExp(2)
    assert F.zero.norm() == ZERO


def test_binomial_norms():
    F = PadicField(5)
    assert binomial(5, 0, F) == F.one and binomial(5, 5, F) == F.one
    assert binomial(5, 1, F).norm() == NormExp(-1)
    with pytest.raises(ValueError):
        binomial(3, 4, F)


def test_power_valuation_is_additive():
    F = PadicField(5)
    assert (F(5 * 3) ** 3).valuation == 3
    assert (F(10) ** -2).valuation == -2


def test_exact_cancellation_is_zero():
    F = PadicField(7, 16)
    x = F(Fraction(22, 7))
    assert (x - x).is_zero


def test_capped_cancellation_raises():
    F = PadicField(5, 8)
    c = F.from_unit(0, 123, 8)
    with pytest.raises(PrecisionExhausted):
        c - c


def test_division_by_zero():
    F = PadicField(3)
    with pytest.raises(DivisionByZero):
        F(1) / F(0)


def test_norm_exp_order_and_arithmetic():
    assert ZERO < NormExp(-100) < ONE_NORM < NormExp(3)
    assert NormExp(2) * NormExp(-5) == NormExp(-3)
    assert NormExp(2) * ZERO == ZERO
    assert NormExp(-2).to_fraction(5) == Fraction(1, 25)


@given(primes, st.data())
def test_valuation_matches_oracle(p, data):
    q = data.draw(nonzero_rationals(p))
    F = PadicField(p, 64)
    assert F(q).valuation == vp(q, p)
    assert F(q).to_fraction() == q


@given(primes, st.data())
def test_norm_multiplicative_and_ultrametric(p, data):
    F = PadicField(p, 64)
    a, b = (F(data.draw(nonzero_rationals(p))) for _ in range(2))
    assert (a * b).norm() == a.norm() * b.norm()
    s = a + b
    assert s.norm() <= max(a.norm(), b.norm())
    if a.valuation != b.valuation:
        assert s.norm() == max(a.norm(), b.norm())


@given(primes, st.data())
def test_inverse_against_rationals(p, data):
    F = PadicField(p, 64)
    q = data.draw(nonzero_rationals(p))
    a = F(q)
    assert a * a.inverse() == F.one
    assert a.inverse().to_fraction() == 1 / q


@given(primes, st.integers(-5, 5), st.integers(1, 10 ** 9))
def test_capped_product_keeps_valuation(p, v, u):
    F = PadicField(p, 32)
    u = u * p + 1
    c = F.from_unit(v, u, 32)
    assert (c * c).valuation == 2 * v
    assert c.norm() == NormExp(-v)
    assert c.agrees_with(F.uniformizer_power(v) * F(u), 32)
