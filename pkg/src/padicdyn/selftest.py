"""Acceptance checks, runnable from the CLI (``padicdyn selftest``) and from pytest.

Each check returns a :class:`CheckResult`; nothing here loosens a tolerance.
Norm comparisons are exact integer-exponent comparisons throughout.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate, chain, cycle, islice

from . import dynamics, ops
from .criteria import Property, decide, decide_lambda_mu
from .field import ONE_NORM, NormExp, PadicField
from .seq import INTEGERS, NATURALS, Ball, FinVector

PRIMES = (2, 5, 7)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_record(self) -> dict:
        return {"record": "selftest", "check": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail}


# -- random generators --------------------------------------------------------------


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _oracle_valuation(q: Fraction, p: int) -> int:
    return _vp(q.numerator, p) - _vp(q.denominator, p)


def random_unit(rng: random.Random, p: int, bound: int = 10 ** 6) -> Fraction:
    """A random rational of valuation 0."""
    while True:
        a, b = rng.randint(1, bound), rng.randint(1, bound)
        if a % p and b % p:
            return Fraction(rng.choice((1, -1)) * a, b)


def random_scalar(rng, F: PadicField, vlo=-3, vhi=3, bound=50):
    v = rng.randint(vlo, vhi)
    return F(random_unit(rng, F.p, bound) * Fraction(F.p) ** v)


def random_vector(rng, F, domain, lo, hi, max_support, vlo=-3, vhi=3) -> FinVector:
    size = rng.randint(1, max_support)
    idx = rng.sample(range(lo, hi + 1), min(size, hi - lo + 1))
    return FinVector(F, domain, {i: random_scalar(rng, F, vlo, vhi) for i in idx})


def random_valuations(rng, length: int, mean_sign: int | None = None) -> list[int]:
    """Valuations in [-3, 3]; with ``mean_sign`` the period sum has that sign."""
    while True:
        vals = [rng.randint(-3, 3) for _ in range(length)]
        s = sum(vals)
        if mean_sign is None or (s > 0 if mean_sign > 0 else s < 0 if mean_sign < 0 else s == 0):
            return vals


def random_weight_model(rng, F, domain, nonzero_mean=True, units=False) -> ops.WeightModel:
    def seq(length, sign):
        vals = random_valuations(rng, length, sign)
        return tuple(F(Fraction(F.p) ** v * (random_unit(rng, F.p, 20) if units else 1)) for v in vals)

    sign = lambda: rng.choice((-1, 1)) if nonzero_mean else None
    prefix = seq(rng.randint(0, 5), None)
    period = seq(rng.randint(1, 8), sign())
    if domain is NATURALS:
        return ops.WeightModel(domain, prefix, period, (), ())
    return ops.WeightModel(domain, prefix, period, seq(rng.randint(0, 5), None), seq(rng.randint(1, 8), sign()))


# -- 1. field laws -------------------------------------------------------------------


def check_field_laws(seed=0, pairs=10_000) -> CheckResult:
    rng = random.Random(seed)
    bad = eq_cases = 0
    for t in range(pairs):
        p = PRIMES[t % len(PRIMES)]
        F = PadicField(p, 64)
        qs = [random_unit(rng, p) * Fraction(p) ** rng.randint(-12, 12) for _ in range(2)]
        if t % 2:
            xs = [F(q) for q in qs]
        else:
            # capped scalars with 64 random digits
            xs = [F.from_unit(_oracle_valuation(q, p), rng.randrange(1, p ** 64) * p + rng.randrange(1, p), 64)
                  for q in qs]
        x, y = xs
        vx, vy = x.valuation, y.valuation
        if x.norm() != NormExp(-vx) or (t % 2 and vx != _oracle_valuation(qs[0], p)):
            bad += 1
        if (x * y).norm() != x.norm() * y.norm():
            bad += 1
        s = x + y
        if not s.norm() <= max(x.norm(), y.norm()):
            bad += 1
        if vx != vy:
            eq_cases += 1
            if s.norm() != max(x.norm(), y.norm()) or (x - y).norm() != max(x.norm(), y.norm()):
                bad += 1
    return CheckResult(1, "field laws", bad == 0,
                       f"{pairs} pairs over p in {PRIMES}, {eq_cases} unequal-norm cases, {bad} violations")


# -- 2. power oracle -----------------------------------------------------------------


def _random_operator(rng, F, kind):
    lam, mu = random_scalar(rng, F), random_scalar(rng, F)
    if kind == "identity":
        return ops.Identity(), rng.choice((NATURALS, INTEGERS))
    if kind == "scalar":
        return ops.ScalarMul(lam), rng.choice((NATURALS, INTEGERS))
    if kind == "bilateral":
        return ops.BilateralBackwardShift(random_weight_model(rng, F, INTEGERS, False, True)), INTEGERS
    if kind == "unilateral":
        return ops.UnilateralBackwardShift(random_weight_model(rng, F, NATURALS, False, True)), NATURALS
    if kind == "forward":
        dom = rng.choice((NATURALS, INTEGERS))
        return ops.ForwardShift(random_weight_model(rng, F, dom, False, True)), dom
    if kind == "lambda-mu":
        dom = rng.choice((NATURALS, INTEGERS))
        return ops.LambdaMu(lam, mu, dom), dom
    if kind == "right-inverse":
        return ops.RightInverseLambdaMu(lam, mu), NATURALS
    raise AssertionError(kind)


POWER_KINDS = ("identity", "scalar", "bilateral", "unilateral", "forward", "lambda-mu", "right-inverse")


def check_power_oracle(seed=0, cases=210) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    for t in range(cases):
        F = PadicField(rng.choice(PRIMES), 64)
        kind = POWER_KINDS[t % len(POWER_KINDS)]
        op, dom = _random_operator(rng, F, kind)
        x = random_vector(rng, F, dom, 1 if dom is NATURALS else -10, 20 if dom is NATURALS else 10, 20)
        n = rng.randint(0, 30 if kind != "right-inverse" else 12)
        y = x
        for _ in range(n):
            y = ops.apply(op, y)
        if ops.apply_power(op, n, x) != y:
            bad.append((kind, n))
    return CheckResult(2, "power oracle", not bad,
                       f"{cases} cases across {len(POWER_KINDS)} operator kinds, mismatches: {bad[:5] or 'none'}")


# -- 3. right inverse ----------------------------------------------------------------


def check_right_inverse(seed=0, vectors=500) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for t in range(vectors):
        F = PadicField(PRIMES[t % len(PRIMES)], 64)
        lam, mu = random_scalar(rng, F), random_scalar(rng, F)
        x = random_vector(rng, F, NATURALS, 1, 50, 20)
        if ops.apply(ops.LambdaMu(lam, mu, NATURALS), ops.right_inverse_apply(lam, mu, x)) != x:
            bad += 1
    return CheckResult(3, "right inverse", bad == 0, f"T(Sx) = x on {vectors} vectors, {bad} failures")


# -- 4. decider vs brute-force scan ------------------------------------------------------


def _scan_sums(pre: list[int], per: list[int], n_max: int) -> list[int]:
    vals = chain(pre, cycle(per))
    return list(accumulate(islice(vals, n_max)))


def _diverges_down(seq: list[int], threshold: int) -> bool:
    """Threshold-crossing test for ``liminf seq = -inf`` on a finite prefix."""
    tail = seq[len(seq) // 2:]
    return min(tail) < -threshold and min(tail[len(tail) // 2:]) < min(tail[: len(tail) // 2]) - threshold // 4


def scan_verdicts(w: ops.WeightModel, n_max: int = 10 ** 5, threshold: int = 1000) -> dict:
    """Brute-force verdicts straight from partial sums of valuations."""
    fwd = _scan_sums([a.valuation for a in w.prefix], [a.valuation for a in w.period], n_max)
    if w.domain is NATURALS:
        # limsup prod |a_i| = inf  <=>  liminf sum v(a_i) = -inf
        return {"uni_hc": _diverges_down(fwd, threshold)}
    bwd = _scan_sums([a.valuation for a in w.backward_prefix], [a.valuation for a in w.backward_period], n_max)
    hc = [max(f, -b) for f, b in zip(fwd, bwd)]
    sc = [f - b for f, b in zip(fwd, bwd)]
    return {"hc": _diverges_down(hc, threshold), "sc": _diverges_down(sc, threshold)}


def check_decider_scan(seed=0, models=120) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    for t in range(models):
        F = PadicField(PRIMES[t % len(PRIMES)], 64)
        dom = INTEGERS if t % 3 else NATURALS
        w = random_weight_model(rng, F, dom, nonzero_mean=True)
        scan = scan_verdicts(w)
        if dom is NATURALS:
            got = {"uni_hc": decide(ops.UnilateralBackwardShift(w), Property.HYPERCYCLIC).answer}
        else:
            op = ops.BilateralBackwardShift(w)
            got = {"hc": decide(op, Property.HYPERCYCLIC).answer, "sc": decide(op, Property.SUPERCYCLIC).answer}
        if got != scan:
            bad.append(t)
    return CheckResult(4, "decider/scan agreement", not bad,
                       f"{models} models scanned to n = 10^5, disagreements at {bad[:5] or 'none'}")


# -- 5. lambda-mu grid ----------------------------------------------------------------


def check_lambda_mu_grid(p=5, depth=40, basis_bound=20) -> CheckResult:
    F = PadicField(p, 64)
    bad = []
    cells = 0
    for a in range(-3, 4):
        for b in range(-3, 4):
            lam, mu = F.uniformizer_power(a), F.uniformizer_power(b)
            for dom in (NATURALS, INTEGERS):
                expect = {Property.HYPERCYCLIC: dom is NATURALS and a > 0 > b,
                          Property.SUPERCYCLIC: dom is NATURALS and a > b}
                op = ops.LambdaMu(lam, mu, dom)
                for prop, verify in ((Property.HYPERCYCLIC, dynamics.verify_hc_criterion),
                                     (Property.SUPERCYCLIC, dynamics.verify_sc_criterion)):
                    cells += 1
                    verdict = decide_lambda_mu(lam, mu, dom, prop).answer
                    report = verify(op, basis_bound=basis_bound, depth=depth)
                    if verdict != expect[prop] or report.passed != expect[prop]:
                        bad.append((a, b, dom.value, prop.value))
    return CheckResult(5, "lambda-mu trichotomy grid", not bad,
                       f"{cells} (cell, domain, property) combinations, mismatches: {bad[:4] or 'none'}")


# -- 6. transitivity witnesses ---------------------------------------------------------


def check_transitivity(seed=0, pairs=50, p=5) -> CheckResult:
    rng = random.Random(seed)
    F = PadicField(p, 64)
    hc_ops = [ops.LambdaMu(F.uniformizer_power(a), F.uniformizer_power(b), NATURALS)
              for a in range(-3, 4) for b in range(-3, 4)
              if decide_lambda_mu(F.uniformizer_power(a), F.uniformizer_power(b), NATURALS,
                                  Property.HYPERCYCLIC).answer]
    balls = []
    for _ in range(pairs):
        mk = lambda: Ball(random_vector(rng, F, NATURALS, 1, 10, 5), rng.randint(-6, 2), rng.random() < 0.5)
        balls.append((mk(), mk()))
    bad, n_top = [], 0
    for op in hc_ops:
        for U, V in balls:
            try:
                w = dynamics.transitivity_witness(op, U, V, n_max=1000)
            except Exception as exc:  # NotFound or anything unexpected is a failure here
                bad.append(f"{op.describe()}: {exc}")
                continue
            z_ok = U.contains(w.z)
            img_ok = V.contains(ops.apply_power(op, w.n, w.z))
            if not (z_ok and img_ok and w.n <= 1000):
                bad.append(op.describe())
            n_top = max(n_top, w.n)
    return CheckResult(6, "transitivity witnesses", not bad,
                       f"{len(hc_ops)} operators x {pairs} ball pairs, max n = {n_top}, failures {len(bad)}")


# -- 7. obstruction certificates ----------------------------------------------------------


def check_obstructions(seed=0, vectors=50, n_max=100) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for t in range(vectors):
        F = PadicField(PRIMES[t % len(PRIMES)], 64)
        b = rng.randint(-3, 3)
        a = rng.randint(-3, b)  # v(lambda) <= v(mu)
        lam = F(random_unit(rng, F.p, 20) * Fraction(F.p) ** a)
        mu = F(random_unit(rng, F.p, 20) * Fraction(F.p) ** b)
        x = random_vector(rng, F, INTEGERS, -6, 6, 5)
        w = dynamics.obstruction_witness_lambda_mu(lam, mu, x, n_max)
        k, xk = w.index, x[w.index].norm()
        # recompute the identities from an independent orbit
        y = x
        op = ops.LambdaMu(lam, mu, INTEGERS)
        for n in range(n_max + 1):
            if n:
                y = ops.apply(op, y)
            target = lam.norm() ** n * xk
            if not (y[k].norm() == target and y[k + 1].norm() < target):
                bad += 1
                break
        if not w.holds or len(w.rows) != n_max + 1:
            bad += 1
    return CheckResult(7, "obstruction certificates", bad == 0,
                       f"{vectors} bilateral vectors, n <= {n_max}, {bad} failures")


# -- 8. scaling sequence ---------------------------------------------------------------


def check_scaling(seed=0, inputs=20, length=60, m_max=10) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(inputs):
        F = PadicField(rng.choice(PRIMES), 64)
        pairs = []
        for n in range(1, length + 1):
            ex = rng.randint(-40, 40)
            x = FinVector(F, NATURALS, {rng.randint(1, 9): F.uniformizer_power(-ex)})
            y = FinVector(F, NATURALS, {rng.randint(1, 9): F.uniformizer_power(ex + n)})
            pairs.append((x, y))
        alphas = dynamics.scaling_sequence(pairs)
        worst = [max(a, b) for a, b in dynamics.scaled_norms(pairs, alphas)]
        for m in range(1, m_max + 1):
            bound = NormExp(-m)
            if not any(all(v <= bound for v in worst[N:]) for N in range(length - 5)):
                bad += 1
    return CheckResult(8, "scaling sequence", bad == 0,
                       f"{inputs} inputs of length {length} with ||x_n|| ||y_n|| = p^-n, {bad} failures")


# -- 9. consistency ----------------------------------------------------------------------


def check_consistency(seed=0, models=60) -> CheckResult:
    rng = random.Random(seed)
    F = PadicField(5, 64)
    bad = []
    operators = [ops.LambdaMu(F.uniformizer_power(a), F.uniformizer_power(b), dom)
                 for a in range(-3, 4) for b in range(-3, 4) for dom in (NATURALS, INTEGERS)]
    for t in range(models):
        dom = INTEGERS if t % 2 else NATURALS
        w = random_weight_model(rng, F, dom, nonzero_mean=bool(t % 3))
        operators.append(ops.BilateralBackwardShift(w) if dom is INTEGERS else ops.UnilateralBackwardShift(w))
    for op in operators:
        hc = decide(op, Property.HYPERCYCLIC).answer
        sc = decide(op, Property.SUPERCYCLIC).answer
        if hc and not sc:
            bad.append("HC without SC")
        if hc and not ONE_NORM < ops.operator_norm(op):
            bad.append("HC with ||T|| <= 1")
        if isinstance(op, ops.BilateralBackwardShift):
            for _ in range(3):
                c = random_scalar(rng, F, -4, 4)
                if decide(ops.BilateralBackwardShift(op.weights.scaled(c)), Property.SUPERCYCLIC).answer != sc:
                    bad.append("SC changed under scaling")
    return CheckResult(9, "consistency meta-checks", not bad,
                       f"{len(operators)} operators, violations: {bad[:3] or 'none'}")


CHECKS = (check_field_laws, check_power_oracle, check_right_inverse, check_decider_scan,
          check_lambda_mu_grid, check_transitivity, check_obstructions, check_scaling, check_consistency)


def timed(check, **kwargs) -> CheckResult:
    t0 = time.perf_counter()
    r = check(**kwargs)
    r.seconds = time.perf_counter() - t0
    return r


def run_all(seed: int = 0) -> list[CheckResult]:
    out = []
    for check in CHECKS:
        kwargs = {} if check is check_lambda_mu_grid else {"seed": seed}
        out.append(timed(check, **kwargs))
    return out
