import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicdyn import (INTEGERS, NATURALS, BilateralBackwardShift, LambdaMu, PadicField, Property,
                      UnilateralBackwardShift, WeightModel, check_precedence, decide,
                      decide_bilateral_hypercyclic, decide_bilateral_supercyclic, decide_finite_dim,
                      decide_lambda_mu, decide_perturbed, decide_unilateral, perturbation_reduce)
from padicdyn.criteria import ValuationSums
from padicdyn.errors import PrecedenceViolation, WrongDomain
from padicdyn.selftest import random_weight_model, scan_verdicts

F = PadicField(5, 64)
HC, SC = Property.HYPERCYCLIC, Property.SUPERCYCLIC


def bilateral(fwd, bwd, prefix=(), bprefix=()):
    return WeightModel.from_valuations(F, INTEGERS, prefix, fwd, bprefix, bwd)


def test_bilateral_examples():
    yes = bilateral([-1], [1])
    assert decide_bilateral_hypercyclic(yes).answer
    assert decide_bilateral_supercyclic(yes).answer
    flat = bilateral([0], [0])
    assert not decide_bilateral_hypercyclic(flat).answer
    assert not decide_bilateral_supercyclic(flat).answer
    # |a_n| = |a_-n| for every n
    sym = WeightModel.from_valuations(F, INTEGERS, (), (2, -1), (-1,), (-1, 2))
    assert not decide_bilateral_supercyclic(sym).answer
    with pytest.raises(WrongDomain):
        decide_bilateral_hypercyclic(WeightModel.constant(F, NATURALS))


def test_yes_verdicts_carry_certificates_and_no_verdicts_tags():
    v = decide_bilateral_hypercyclic(bilateral([-1], [1]))
    assert v.certificate and v.generator is not None
    n = decide_bilateral_supercyclic(bilateral([0], [0]))
    assert n.tag and not n.answer


def test_unilateral_examples():
    any_model = WeightModel.from_valuations(F, NATURALS, (3,), (2, 1))
    assert decide_unilateral(any_model, SC).answer
    assert decide_unilateral(WeightModel.from_valuations(F, NATURALS, (), (-1,)), HC).answer
    assert not decide_unilateral(WeightModel.constant(F, NATURALS), HC).answer


def test_lambda_mu_examples():
    assert decide_lambda_mu(F(5), F("1/5"), NATURALS, HC).answer
    for v in range(-3, 4):
        assert not decide_lambda_mu(F.one, F.uniformizer_power(v), NATURALS, HC).answer
        for w in range(-3, 4):
            lam, mu = F.uniformizer_power(v), F.uniformizer_power(w)
            assert not decide_lambda_mu(lam, mu, INTEGERS, SC).answer
            assert not decide_lambda_mu(lam, mu, INTEGERS, HC).answer


def test_finite_dim_always_no():
    for dim in (1, 7):
        v = decide_finite_dim(dim)
        assert not v.answer and "det" in v.justification


def test_valuation_sums_match_direct_sums():
    w = bilateral([1, -2, 0], [2, -1], prefix=[3], bprefix=[-3, 1])
    s = ValuationSums(w)
    for n in range(0, 30):
        assert s.forward(n) == sum(w.valuation_at(i) for i in range(1, n + 1))
        assert s.backward(n) == sum(w.valuation_at(1 - j) for j in range(1, n + 1))


def test_perturbation_examples():
    a = WeightModel.from_valuations(F, NATURALS, (), (-1,))
    b = WeightModel.from_valuations(F, NATURALS, (), (0,))
    assert perturbation_reduce(a, b) == a
    with pytest.raises(PrecedenceViolation):
        check_precedence(a, a)


def _dominated(rng, a: WeightModel) -> WeightModel:
    def seq(ws):
        return tuple(F.uniformizer_power(w.valuation + rng.randint(1, 3)) * F(rng.choice((1, 2, 3))) for w in ws)
    return WeightModel(a.domain, seq(a.prefix), seq(a.period), seq(a.backward_prefix), seq(a.backward_period))


@pytest.mark.parametrize("seed", range(50))
def test_perturbed_verdict_equals_unperturbed(seed):
    rng = random.Random(seed)
    dom = INTEGERS if seed % 2 else NATURALS
    a = random_weight_model(rng, F, dom)
    b = _dominated(rng, a)
    for prop in (HC, SC):
        op = BilateralBackwardShift if dom is INTEGERS else UnilateralBackwardShift
        assert decide(op(a + b), prop).answer == decide(op(a), prop).answer
        assert decide_perturbed(a, b, prop).answer == decide(op(a), prop).answer


@given(st.integers(0, 10 ** 6))
def test_deciders_agree_with_scan(seed):
    rng = random.Random(seed)
    dom = rng.choice((NATURALS, INTEGERS))
    w = random_weight_model(rng, F, dom, nonzero_mean=True)
    scan = scan_verdicts(w, n_max=20_000, threshold=200)
    if dom is NATURALS:
        assert scan["uni_hc"] == decide(UnilateralBackwardShift(w), HC).answer
    else:
        op = BilateralBackwardShift(w)
        assert scan == {"hc": decide(op, HC).answer, "sc": decide(op, SC).answer}


def test_zero_mean_models_are_no():
    w = bilateral([1, -1], [2, -2], prefix=[-3, -3])
    assert not decide(BilateralBackwardShift(w), HC).answer
    assert not decide(BilateralBackwardShift(w), SC).answer
    assert not decide(UnilateralBackwardShift(WeightModel.from_valuations(F, NATURALS, (-3,), (1, -1))), HC).answer


def test_generators_are_increasing():
    v = decide(LambdaMu(F(5), F("1/125"), NATURALS), HC)
    seq = v.generator.take(20)
    assert all(a < b for a, b in zip(seq, seq[1:]))
    g = decide_bilateral_supercyclic(bilateral([-1, 0], [1])).generator.take(15)
    assert all(a < b for a, b in zip(g, g[1:]))
