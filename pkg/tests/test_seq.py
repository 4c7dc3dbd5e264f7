import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import vectors
from padicdyn import INTEGERS, NATURALS, ONE_NORM, ZERO, Ball, FinVector, NormExp, PadicField, parse_vector
from padicdyn.errors import DomainMismatch, IndexOutOfDomain, NotInC0, ParseError
from padicdyn.seq import dist, format_vector, rational_seq

F = PadicField(5, 64)


def e(i, domain=NATURALS):
    return FinVector.basis(i, domain, F)


def test_sup_norm_examples():
    assert FinVector.zero(F, NATURALS).sup_norm() == ZERO
    assert e(3).sup_norm() == ONE_NORM
    x = FinVector(F, NATURALS, {1: F(5), 2: F("1/5")})
    assert x.sup_norm() == NormExp(1)


def test_add_negation_and_distance():
    x = parse_vector("1:3/2 4:5/1", F, NATURALS)
    assert (x + (-1) * x).is_zero
    assert dist(e(1), e(2)) == ONE_NORM


def test_index_domain_checks():
    with pytest.raises(IndexOutOfDomain):
        e(0)
    assert e(0, INTEGERS).support == (0,)
    with pytest.raises(DomainMismatch):
        e(1) + e(1, INTEGERS)


def test_ball_membership():
    B = Ball(e(1), -1)
    assert B.contains(e(1) + 5 * e(4))
    assert not B.contains(e(1) + e(4))
    assert Ball(e(2), 0, closed=False).contains(e(2) + 5 * e(3))
    assert not Ball(e(2), 0, closed=False).contains(e(2) + e(3))


def test_parse_errors_carry_column():
    with pytest.raises(ParseError) as info:
        parse_vector("1:1/1 bad", F, NATURALS)
    assert info.value.column == 7


def test_format_round_trip():
    x = parse_vector("2:-3/7 9:25/1", F, NATURALS)
    assert parse_vector(format_vector(x), F, NATURALS) == x


def test_geometric_tail_has_exact_norm():
    # 1/(1 - 5z): entries 5^(i-1), so the sup norm is the first entry's
    s = rational_seq(e(1), F(5), 1)
    assert s.sup_norm() == ONE_NORM
    assert s.coefficient(4) == F(125)
    with pytest.raises(NotInC0):
        rational_seq(e(1), F(1), 1).sup_norm()


def test_rational_seq_collapses_when_divisible():
    # (1 - 2z) / (1 - 2z) == 1
    num = FinVector(F, NATURALS, {1: F(1), 2: F(-2)})
    assert rational_seq(num, F(2), 1) == e(1)


@given(vectors(F, NATURALS), st.integers(-4, 4))
def test_scale_norm(x, v):
    lam = F.uniformizer_power(v) * F(3)
    assert (lam * x).sup_norm() == lam.norm() * x.sup_norm()


@given(vectors(F, INTEGERS), vectors(F, INTEGERS), vectors(F, INTEGERS))
def test_distance_is_ultrametric(x, y, z):
    assert dist(x, z) <= max(dist(x, y), dist(y, z))


@given(vectors(F, NATURALS, max_size=4), st.integers(-3, 2), st.integers(0, 2 ** 32))
def test_every_member_is_a_center(a, r, seed):
    rng = random.Random(seed)
    B = Ball(a, r)
    # a member at distance <= r
    y = a + FinVector(F, NATURALS, {rng.randint(1, 5): F.uniformizer_power(-r) * F(rng.randint(1, 4))})
    assert B.contains(y)
    C = Ball(y, r)
    for _ in range(10):
        w = a + FinVector(F, NATURALS, {rng.randint(1, 6): F.uniformizer_power(rng.randint(-r - 2, -r + 2))})
        assert B.contains(w) == C.contains(w)
