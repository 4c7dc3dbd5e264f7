import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import vectors
from padicdyn import (INTEGERS, NATURALS, ONE_NORM, ZERO, Ball, FinVector, Identity, LambdaMu, NormExp,
                      PadicField, Property, UnilateralBackwardShift, WeightModel, apply_power, decide,
                      finite_dim_obstruction, open_set_invariance_check, obstruction_witness_lambda_mu, orbit,
                      scaling_sequence, transitivity_witness, verify_hc_criterion, verify_sc_criterion)
from padicdyn.dynamics import scaled_norms, tends_to_zero
from padicdyn.errors import HypothesisViolated, NotFound, ParameterViolation, ZeroScalar, ZeroVector

F = PadicField(5, 64)


def e(i, domain=NATURALS):
    return FinVector.basis(i, domain, F)


def test_orbit_examples():
    x = e(2) + 3 * e(5)
    assert all(y == x for _, y, _ in orbit(Identity(), x, 5))
    B = UnilateralBackwardShift(WeightModel.constant(F, NATURALS))
    got = [y for _, y, _ in orbit(B, e(3), 5)]
    assert got[:3] == [e(3), e(2), e(1)] and all(y.is_zero for y in got[3:])


def test_tends_to_zero_certificate():
    vals = [NormExp(-k) for k in range(1, 30)]
    K = tends_to_zero(vals, 20)
    assert K[5] == 5 and K[20] == 20
    assert tends_to_zero([ONE_NORM] * 10, 3)[1] is None
    assert tends_to_zero([ZERO] * 4, 3)[3] == 1


def test_unilateral_criteria():
    w = WeightModel.from_valuations(F, NATURALS, (), (-1,))
    B = UnilateralBackwardShift(w)
    assert verify_hc_criterion(B, basis_bound=8, depth=20).passed
    flat = UnilateralBackwardShift(WeightModel.constant(F, NATURALS))
    assert verify_sc_criterion(flat, basis_bound=8, depth=20).passed
    assert not verify_hc_criterion(flat, basis_bound=8, depth=20).passed


def test_lambda_mu_criteria():
    good = LambdaMu(F(5), F("1/5"), NATURALS)
    r = verify_hc_criterion(good, basis_bound=6, depth=15, max_threshold=10)
    assert r.passed and r.identity_exact
    bad = LambdaMu(F(1), F("1/5"), NATURALS)
    r = verify_hc_criterion(bad, basis_bound=6, depth=15, max_threshold=10)
    assert not r.passed and not r.conditions[0].passed
    assert verify_sc_criterion(LambdaMu(F(25), F(5), NATURALS), basis_bound=6, depth=15, max_threshold=10).passed
    assert not verify_sc_criterion(LambdaMu(F(5), F(5), NATURALS), basis_bound=6, depth=15, max_threshold=10).passed


def test_criterion_on_integers_fails_without_right_inverse():
    r = verify_sc_criterion(LambdaMu(F(5), F("1/5"), INTEGERS))
    assert not r.passed


def test_witness_examples():
    op = LambdaMu(F(5), F("1/5"), NATURALS)
    w = transitivity_witness(op, Ball(e(1), -3), Ball(e(2), -3))
    assert w.in_U and w.in_V and w.n <= 20
    assert apply_power(op, w.n, w.z) == w.image
    zero = FinVector.zero(F, NATURALS)
    w0 = transitivity_witness(op, Ball(zero, 0), Ball(zero, 0))
    assert w0.n == 0 and w0.z.is_zero
    with pytest.raises(NotFound):
        transitivity_witness(Identity(), Ball(e(1), -1), Ball(e(2), -1), n_max=50)


@given(vectors(F, NATURALS, hi=8, max_size=4), vectors(F, NATURALS, hi=8, max_size=4), st.integers(-6, 1))
def test_witnesses_reverify(c1, c2, r):
    op = LambdaMu(F(25), F("1/5"), NATURALS)
    U, V = Ball(c1, r), Ball(c2, r, closed=False)
    w = transitivity_witness(op, U, V)
    assert U.contains(w.z) and V.contains(apply_power(op, w.n, w.z))


def test_scaling_examples():
    pairs = [(FinVector(F, NATURALS, {1: F.uniformizer_power(n)}), e(1)) for n in range(1, 40)]
    alphas = scaling_sequence(pairs)
    for n, (a, b) in enumerate(scaled_norms(pairs, alphas), start=1):
        bound = NormExp(-(n // 2) + 1)
        assert a <= bound and b <= bound
    zero = FinVector.zero(F, NATURALS)
    assert scaling_sequence([(zero, zero)]) == [0]
    # x = 0: |nu| = ||y|| / r**n, i.e. alpha = -(log_p ||y|| + n)
    assert scaling_sequence([(zero, e(1)), (zero, zero)]) == [-1, 0]
    with pytest.raises(HypothesisViolated):
        scaling_sequence([(e(1), e(2))] * 5)


@given(st.lists(st.integers(-30, 30), min_size=5, max_size=40))
def test_scaling_bound(exps):
    pairs = [(NormExp(ex), NormExp(-n - ex)) for n, ex in enumerate(exps, start=1)]
    alphas = scaling_sequence(pairs)
    for n, ((x, y), (a, b)) in enumerate(zip(pairs, scaled_norms(pairs, alphas)), start=1):
        # max(...) <= p * (||x|| ||y||)^(1/2)
        assert 2 * max(a, b).exponent <= 2 + (x * y).exponent


def test_obstruction_examples():
    w = obstruction_witness_lambda_mu(F(1), F(5), e(0, INTEGERS), 30)
    assert w.index == 0 and w.holds
    assert all(row["abs_xk"] == 0 for row in w.rows)
    # |1/5| = 5 > 1, so this pair falls in the mu-dominant case
    w = obstruction_witness_lambda_mu(F(1), F("1/5"), e(0, INTEGERS), 30)
    assert w.case.startswith("|mu|") and w.holds
    assert [row["abs_x_l_minus_n"] for row in w.rows] == list(range(31))
    w = obstruction_witness_lambda_mu(F(1), F(1), FinVector(F, INTEGERS, {-2: F(3), 1: F(5), 4: F(1)}), 100)
    assert w.holds
    with pytest.raises(ZeroVector):
        obstruction_witness_lambda_mu(F(1), F(1), FinVector.zero(F, INTEGERS))


@pytest.mark.parametrize("seed", range(10))
def test_obstruction_mu_dominant(seed):
    rng = random.Random(seed)
    x = FinVector(F, INTEGERS, {i: F(rng.randint(1, 4)) * F.uniformizer_power(rng.randint(-2, 2))
                                for i in rng.sample(range(-5, 6), 4)})
    lam, mu = F(5), F(rng.choice(["1/5", "1", "1/25"]))
    w = obstruction_witness_lambda_mu(lam, mu, x, 40)
    assert w.case.startswith("|mu|") and w.holds


def test_open_set_check():
    r = open_set_invariance_check(F(1), F("1/5"), k_max=5, samples=3, n_max=8)
    assert r.holds and r.ratio_exponent == 1
    s = r.samples[0]
    assert all(3 ** k < s[k].valuation < 3 ** k + 2 for k in range(1, 6))
    assert {row["n"] for row in r.rows} >= {0}
    with pytest.raises(ParameterViolation):
        open_set_invariance_check(F(5), F(1))


def test_finite_dim_obstruction():
    for a in (F(3), F(5), F("1/5")):
        assert finite_dim_obstruction(a, 15).holds
    with pytest.raises(ZeroScalar):
        finite_dim_obstruction(F(0))


@pytest.mark.parametrize("a,b", [(1, -1), (2, -1), (1, -2), (0, -1), (1, 0), (-1, -2), (-2, 1)])
def test_criterion_matches_decider(a, b):
    op = LambdaMu(F.uniformizer_power(a), F.uniformizer_power(b), NATURALS)
    for prop, verify in ((Property.HYPERCYCLIC, verify_hc_criterion), (Property.SUPERCYCLIC, verify_sc_criterion)):
        assert verify(op, basis_bound=8, depth=25).passed == decide(op, prop).answer


def test_reports_serialize():
    r = verify_hc_criterion(LambdaMu(F(5), F("1/5"), NATURALS), basis_bound=4, depth=10, max_threshold=5)
    recs = r.to_records()
    assert recs[0]["record"] == "criterion"
    assert all(isinstance(v, (int, str)) for c in recs[1:] for v in c["norm_exponents"])
