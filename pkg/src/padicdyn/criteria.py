"""Exact deciders for hypercyclicity and supercyclicity.

Every weight product in the characterizations is a power of ``p`` whose
exponent is a partial sum of weight valuations, so for prefix + periodic
weights the liminf/limsup conditions reduce to the sign of a period mean.
A mean of exactly zero leaves the partial sums inside a fixed window, which
rules out divergence: the verdict is then No with no tolerance involved.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import PrecedenceViolation, Unsupported, WrongDomain
from .ops import BilateralBackwardShift, LambdaMu, UnilateralBackwardShift, WeightModel
from .seq import INTEGERS, NATURALS, IndexDomain


class Property(enum.Enum):
    HYPERCYCLIC = "hypercyclic"
    SUPERCYCLIC = "supercyclic"

    @classmethod
    def parse(cls, text: str) -> "Property":
        t = text.strip().lower()
        for prop in cls:
            if t in (prop.value, prop.value[0] + "c", prop.name.lower()):
                return prop
        raise ValueError(f"unknown property {text!r}")


class Rule(enum.Enum):
    FINITE_DIM = "finite-dim"
    BILATERAL_HC = "bilateral-hc"
    BILATERAL_SC = "bilateral-sc"
    UNILATERAL_ALWAYS_SC = "unilateral-always-sc"
    UNILATERAL_HC = "unilateral-hc"
    LAMBDA_MU_Z = "lambda-mu-z"
    LAMBDA_MU_N_HC = "lambda-mu-n-hc"
    LAMBDA_MU_N_SC = "lambda-mu-n-sc"
    PERTURBATION = "perturbation"


class SubsequenceGenerator:
    """An increasing sequence ``(n_k)_{k>=1}``, either ``n_k = step*k`` or found by search.

    A search generator takes ``n_k`` to be the least ``n > n_{k-1}`` with
    ``condition(n, k)``.
    """

    def __init__(self, description: str, step: int | None = None,
                 condition: Callable[[int, int], bool] | None = None, params: dict | None = None,
                 search_limit: int = 10 ** 7):
        if (step is None) == (condition is None):
            raise ValueError("give exactly one of step / condition")
        self.description = description
        self.step = step
        self.condition = condition
        self.params = dict(params or {})
        self.search_limit = search_limit
        self._cache = [0]

    def __call__(self, k: int) -> int:
        if k < 1:
            raise ValueError("subsequence index starts at 1")
        if self.step is not None:
            return self.step * k
        while len(self._cache) <= k:
            j = len(self._cache)
            n = self._cache[-1] + 1
            while not self.condition(n, j):
                n += 1
                if n > self.search_limit:
                    raise RuntimeError(f"n_{j} not found below {self.search_limit}")
            self._cache.append(n)
        return self._cache[k]

    def take(self, count: int) -> list[int]:
        return [self(k) for k in range(1, count + 1)]

    def to_record(self) -> dict:
        return {"description": self.description, **self.params}

    def __repr__(self):
        return f"SubsequenceGenerator({self.description!r})"


def identity_generator() -> SubsequenceGenerator:
    return SubsequenceGenerator("n_k = k", step=1)


@dataclass(frozen=True)
class Verdict:
    property: Property
    answer: bool
    rule: Rule
    tag: str
    justification: str
    certificate: dict = field(default_factory=dict)
    generator: SubsequenceGenerator | None = field(default=None, compare=False)

    def to_record(self) -> dict:
        rec = {
            "record": "verdict",
            "property": self.property.value,
            "answer": "yes" if self.answer else "no",
            "rule": self.rule.value,
            "tag": self.tag,
            "justification": self.justification,
            "certificate": self.certificate,
        }
        if self.generator is not None:
            rec["generator"] = self.generator.to_record()
        return rec


class ValuationSums:
    """Exact partial sums of weight valuations.

    ``forward(n) = sum_{i=1}^n v(a_i)`` and ``backward(n) = sum_{j=1}^n v(a_{1-j})``.
    ``log_b(m)`` is the base-p logarithm of ``|b_m|`` for the conjugating
    weights ``b_0 = 1``, ``b_m / b_{m+1} = a_{m+1}``.
    """

    def __init__(self, weights: WeightModel):
        self.weights = weights
        val = lambda seq: [w.valuation for w in seq]
        self._fwd = self._tables(val(weights.prefix), val(weights.period))
        self._bwd = self._tables(val(weights.backward_prefix), val(weights.backward_period)) \
            if weights.domain is INTEGERS else None
        all_v = val(weights.distinct_weights())
        # M = p**E with E the least integer exceeding max(0, max log|a_n|)
        self.m_exponent = max(0, max(-v for v in all_v)) + 1

    @staticmethod
    def _tables(pre, per):
        pc = [0]
        for v in pre:
            pc.append(pc[-1] + v)
        qc = [0]
        for v in per:
            qc.append(qc[-1] + v)
        return pc, qc

    @staticmethod
    def _sum(tables, n: int) -> int:
        pc, qc = tables
        lp = len(pc) - 1
        if n <= lp:
            return pc[n]
        full, rem = divmod(n - lp, len(qc) - 1)
        return pc[lp] + full * qc[-1] + qc[rem]

    def forward(self, n: int) -> int:
        return self._sum(self._fwd, n)

    def backward(self, n: int) -> int:
        if self._bwd is None:
            raise WrongDomain("unilateral weights have no backward sums")
        return self._sum(self._bwd, n)

    @staticmethod
    def _mean(tables) -> Fraction:
        _, qc = tables
        return Fraction(qc[-1], len(qc) - 1)

    @property
    def forward_mean(self) -> Fraction:
        return self._mean(self._fwd)

    @property
    def backward_mean(self) -> Fraction:
        return self._mean(self._bwd)

    def oscillation(self) -> int:
        """Largest deviation of the forward/backward partial sums from their linear trend within one period."""
        out = 0
        for tab in filter(None, (self._fwd, self._bwd)):
            _, qc = tab
            m = Fraction(qc[-1], len(qc) - 1)
            out = max(out, max(math.ceil(abs(qc[r] - m * r)) for r in range(len(qc))))
        return out

    def log_b(self, m: int) -> int:
        return self.forward(m) if m >= 0 else -self.backward(-m)

    def log_unilateral(self, m: int) -> int:
        """Base-p log of ``|prod_{t=1}^{m-1} a_t^{-1}|``."""
        return self.forward(m - 1)


def _require(weights: WeightModel, domain: IndexDomain, what: str):
    if weights.domain is not domain:
        raise WrongDomain(f"{what} needs weights over {domain.name}")


def decide_bilateral_hypercyclic(a: WeightModel) -> Verdict:
    _require(a, INTEGERS, "the bilateral decider")
    vs = ValuationSums(a)
    mf, mb = vs.forward_mean, vs.backward_mean
    means = {"forward_mean": str(mf), "backward_mean": str(mb)}
    if mf < 0 and mb > 0:
        E = vs.m_exponent
        gen = SubsequenceGenerator(
            "least n > n_{k-1} with log|b_{n+k}| <= -3kE and log|b_{-n+k}| <= -3kE",
            condition=lambda n, k: vs.log_b(n + k) <= -3 * k * E and vs.log_b(-n + k) <= -3 * k * E,
            params={"E": E},
        )
        return Verdict(
            Property.HYPERCYCLIC, True, Rule.BILATERAL_HC, "bilateral-max-product-mean-test",
            "forward partial valuation sums tend to -inf and backward ones to +inf, so both weight "
            "products tend to 0 for every offset q",
            {**means, "M_exponent": E, "q_free": True}, gen,
        )
    reason = ("forward" if mf >= 0 else "backward") + (" mean is zero: partial sums stay in a bounded window"
                                                       if (mf == 0 or mb == 0) else " mean has the wrong sign")
    return Verdict(
        Property.HYPERCYCLIC, False, Rule.BILATERAL_HC, "bilateral-max-product-mean-test",
        "one of the two weight products stays bounded away from 0, so the liminf of their maximum is positive",
        {**means, "obstruction": reason},
    )


def decide_bilateral_supercyclic(a: WeightModel) -> Verdict:
    _require(a, INTEGERS, "the bilateral decider")
    vs = ValuationSums(a)
    mf, mb = vs.forward_mean, vs.backward_mean
    diff = mf - mb
    cert = {"forward_mean": str(mf), "backward_mean": str(mb), "mean_difference": str(diff)}
    if diff < 0:
        E = vs.m_exponent
        gen = SubsequenceGenerator(
            "least n > n_{k-1} with log|b_{n+k}| + log|b_{-n+k}| <= -5kE",
            condition=lambda n, k: vs.log_b(n + k) + vs.log_b(-n + k) <= -5 * k * E,
            params={"E": E},
        )
        return Verdict(
            Property.SUPERCYCLIC, True, Rule.BILATERAL_SC, "bilateral-product-mean-test",
            "the difference of forward and backward partial valuation sums tends to -inf, so the "
            "product of the two weight products tends to 0; a common scalar factor cancels",
            {**cert, "M_exponent": E, "q_free": True}, gen,
        )
    return Verdict(
        Property.SUPERCYCLIC, False, Rule.BILATERAL_SC, "bilateral-product-mean-test",
        "the product of the two weight products is bounded below"
        + (" (zero mean difference: bounded oscillation)" if diff == 0 else ""),
        {**cert, "obstruction": "mean difference >= 0"},
    )


def decide_unilateral(a: WeightModel, prop: Property) -> Verdict:
    _require(a, NATURALS, "the unilateral decider")
    vs = ValuationSums(a)
    if prop is Property.SUPERCYCLIC:
        return Verdict(
            Property.SUPERCYCLIC, True, Rule.UNILATERAL_ALWAYS_SC, "unilateral-always-supercyclic",
            "B_a^k x = 0 for large k on finitely supported x and B_a S_a^k = I, for any weights",
            {"S_k": "S_a^k"}, identity_generator(),
        )
    mf = vs.forward_mean
    if mf < 0:
        E = vs.m_exponent
        gen = SubsequenceGenerator(
            "least n > n_{k-1} with log|prod_{t<n+k} a_t^{-1}| <= -3kE",
            condition=lambda n, k: vs.log_unilateral(n + k) <= -3 * k * E,
            params={"E": E},
        )
        return Verdict(
            Property.HYPERCYCLIC, True, Rule.UNILATERAL_HC, "unilateral-product-limsup-test",
            "forward partial valuation sums tend to -inf, so prod |a_i| is unbounded",
            {"forward_mean": str(mf), "M_exponent": E}, gen,
        )
    return Verdict(
        Property.HYPERCYCLIC, False, Rule.UNILATERAL_HC, "unilateral-product-limsup-test",
        "prod |a_i| stays bounded" + (" (zero mean: bounded oscillation)" if mf == 0 else ""),
        {"forward_mean": str(mf), "obstruction": "forward mean >= 0"},
    )


def decide_lambda_mu(lam, mu, domain: IndexDomain, prop: Property) -> Verdict:
    vl, vm = lam.valuation, mu.valuation
    params = {"v_lambda": _fmt_v(vl), "v_mu": _fmt_v(vm)}
    if domain is INTEGERS:
        case = "|lambda| >= |mu|" if vl <= vm else "|mu| > |lambda|"
        return Verdict(
            prop, False, Rule.LAMBDA_MU_Z, "lambda-mu-z-never-supercyclic",
            "on c0(Z) every nonzero orbit keeps a dominant coordinate, so no projective orbit "
            "meets a unit ball around a basis vector",
            {**params, "obstruction_case": case},
        )
    if prop is Property.HYPERCYCLIC:
        if vl > 0 > vm:
            if vl == math.inf:
                C = 1
            else:
                C = -(-(1 + vl - vm) // vl)
            return Verdict(
                prop, True, Rule.LAMBDA_MU_N_HC, "lambda-mu-n-hc-trichotomy",
                "|lambda| < 1 < |mu|: T^n x -> 0 on c00 and ||S^n y|| <= |mu|^-n ||y|| -> 0",
                params, SubsequenceGenerator(f"n_k = {C}k", step=C, params={"C": C}),
            )
        why = ("|lambda| >= 1: the dominant coordinate grows like |lambda|^n" if vl <= 0
               else "|mu| <= 1: the right inverse does not shrink")
        return Verdict(prop, False, Rule.LAMBDA_MU_N_HC, "lambda-mu-n-hc-trichotomy", why,
                       {**params, "obstruction": why})
    if vl > vm:
        return Verdict(
            prop, True, Rule.LAMBDA_MU_N_SC, "lambda-mu-n-sc-trichotomy",
            "|lambda| < |mu|: ||T^n x|| ||S^n y|| <= (|lambda|/|mu|)^(n-const) ||x|| ||y|| -> 0",
            params, SubsequenceGenerator("n_k = 2k", step=2, params={"C": 2}),
        )
    return Verdict(
        prop, False, Rule.LAMBDA_MU_N_SC, "lambda-mu-n-sc-trichotomy",
        "|mu| <= |lambda|: coordinate k of T^n x dominates coordinate k+1 for every n",
        {**params, "obstruction": "|mu| <= |lambda|"},
    )


def _fmt_v(v):
    return "inf" if v == math.inf else int(v)


def decide_finite_dim(dim: int) -> Verdict:
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return Verdict(
        Property.HYPERCYCLIC, False, Rule.FINITE_DIM, "finite-dim-det-dichotomy",
        "a dense orbit would make {det(T)^n} dense in K*, but |a^n - z| > 1 for all |z| > 1 when "
        "|a| <= 1, and |a^n - w| > 1 for all |w| <= 1 when |a| > 1",
        {"dimension": dim, "operator_independent": True},
    )


def check_precedence(a: WeightModel, b: WeightModel) -> None:
    """Raise PrecedenceViolation unless ``|a_n| > |b_n|`` for every index."""
    if a.domain is not b.domain:
        raise WrongDomain("weight models on different domains")
    span = max(len(a.prefix), len(b.prefix)) + math.lcm(len(a.period), len(b.period))
    idx = list(range(1, span + 1))
    if a.domain is INTEGERS:
        bspan = max(len(a.backward_prefix), len(b.backward_prefix)) + \
            math.lcm(len(a.backward_period), len(b.backward_period))
        idx += [-k for k in range(bspan)]
    for n in idx:
        if not a.valuation_at(n) < b.valuation_at(n):
            raise PrecedenceViolation(n)


def perturbation_reduce(a: WeightModel, b: WeightModel) -> WeightModel:
    """The model to decide in place of ``a + b`` when ``|a_n| > |b_n|`` everywhere.

    Then ``|a_n + b_n| = |a_n|``, and the deciders depend on norms only.
    """
    check_precedence(a, b)
    return a


def decide_perturbed(a: WeightModel, b: WeightModel, prop: Property) -> Verdict:
    reduced = perturbation_reduce(a, b)
    inner = _decide_weights(reduced, prop)
    return Verdict(
        prop, inner.answer, Rule.PERTURBATION, "perturbation-dominant-norm",
        "|a_n + b_n| = |a_n| at every index, so a + b gets the verdict of a; " + inner.justification,
        {"inner_rule": inner.rule.value, **inner.certificate}, inner.generator,
    )


def _decide_weights(w: WeightModel, prop: Property) -> Verdict:
    if w.domain is INTEGERS:
        return decide_bilateral_hypercyclic(w) if prop is Property.HYPERCYCLIC else decide_bilateral_supercyclic(w)
    return decide_unilateral(w, prop)


def decide(op, prop: Property) -> Verdict:
    """Decide ``prop`` for an operator of one of the characterized families."""
    if isinstance(op, BilateralBackwardShift):
        return _decide_weights(op.weights, prop)
    if isinstance(op, UnilateralBackwardShift):
        return decide_unilateral(op.weights, prop)
    if isinstance(op, LambdaMu):
        return decide_lambda_mu(op.lam, op.mu, op.domain, prop)
    raise Unsupported(f"no characterization is implemented for {op.describe()}")
