"""Constructive side of the theory: orbits, criterion certificates, witnesses.

Limits are certified at desk scale.  A quantity ``q_k`` "tends to 0" in a
report when, for every threshold ``p**-m`` with ``1 <= m <= max_threshold``,
there is a ``K(m) <= depth`` such that ``q_k <= p**-m`` for all tested
``k >= K(m)``.  Every norm involved is an exact :class:`NormExp`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import ops
from .criteria import Property, SubsequenceGenerator, decide, identity_generator
from .errors import (HypothesisViolated, NotFound, NotInC0, OrbitError, ParameterViolation,
                     PadicDynError, Unsupported, WrongDomain, ZeroScalar, ZeroVector)
from .field import ONE_NORM, ZERO, NormExp, PadicScalar, norm_max
from .seq import INTEGERS, NATURALS, Ball, FinVector, IndexDomain


def _exp(n: NormExp | None):
    """Report encoding of a norm: integer exponent, "zero", or "inf" (not in c0)."""
    if n is None:
        return "inf"
    return "zero" if n.is_zero else n.exponent


def orbit(op, x, n_max: int) -> list[tuple[int, object, NormExp]]:
    """``[(n, T^n x, ||T^n x||) for n <= n_max]``, by repeated application."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = []
    y = x
    for n in range(n_max + 1):
        try:
            if n:
                y = ops.apply(op, y)
            out.append((n, y, y.sup_norm()))
        except PadicDynError as exc:
            raise OrbitError(n, exc) from exc
    return out


# -- criterion certificates ---------------------------------------------------


def tends_to_zero(values: list[NormExp | None], max_threshold: int) -> dict[int, int | None]:
    """``{m: K(m)}``: least k (1-based) after which every value is <= p**-m, or None."""
    out = {}
    for m in range(1, max_threshold + 1):
        bound = NormExp(-m)
        K = None
        for k in range(len(values), 0, -1):
            v = values[k - 1]
            if v is None or bound < v:
                break
            K = k
        out[m] = K
    return out


@dataclass
class Condition:
    name: str
    values: list
    K: dict
    passed: bool
    note: str = ""

    def to_record(self) -> dict:
        return {"condition": self.name, "passed": self.passed, "norm_exponents": [_exp(v) for v in self.values],
                "K": {str(m): k for m, k in self.K.items()}, "note": self.note}


@dataclass
class CriterionReport:
    operator: str
    property: Property
    sequence: list[int]
    basis: list[int]
    depth: int
    max_threshold: int
    conditions: list[Condition]
    identity_exact: bool
    identity_note: str
    passed: bool
    generator: str = ""

    def to_records(self) -> list[dict]:
        head = {
            "record": "criterion",
            "property": self.property.value,
            "operator": self.operator,
            "passed": self.passed,
            "sequence": self.sequence,
            "generator": self.generator,
            "basis": [self.basis[0], self.basis[-1]],
            "depth": self.depth,
            "max_threshold": self.max_threshold,
            "identity_exact": self.identity_exact,
            "identity_note": self.identity_note,
        }
        return [head] + [{"record": "condition", **c.to_record()} for c in self.conditions]


def _basis_indices(domain: IndexDomain, basis_bound: int) -> list[int]:
    if domain is INTEGERS:
        return list(range(-basis_bound, basis_bound + 1))
    return list(range(1, basis_bound + 1))


def _default_generator(op, prop: Property) -> SubsequenceGenerator:
    try:
        v = decide(op, prop)
    except Unsupported:
        return identity_generator()
    return v.generator if (v.answer and v.generator is not None) else identity_generator()


def _safe_norm(x) -> NormExp | None:
    try:
        return x.sup_norm()
    except NotInC0:
        return None


def _verify_identity(op, S, basis: list[FinVector], n_top: int) -> tuple[bool, str]:
    """Certify ``T^n S^n e = e`` for all ``n <= n_top``.

    Checks ``T(S^{j+1} e) = S^j e`` for every ``j < n_top`` (which gives every
    power by induction) and recomputes ``T^{n_top} S^{n_top} e`` directly.
    """
    for e in basis:
        prev = e
        for _ in range(n_top):
            nxt = ops.apply(S, prev)
            if ops.apply(op, nxt) != prev:
                return False, f"T S w != w on the chain from e_{e.min_index()}"
            prev = nxt
        if ops.apply_power(op, n_top, ops.apply_power(S, n_top, e)) != e:
            return False, f"T^{n_top} S^{n_top} e_{e.min_index()} != e_{e.min_index()}"
    return True, f"T S w = w along every chain S^j e_i, j < {n_top}, and T^{n_top} S^{n_top} e_i = e_i recomputed"


def _criterion_data(op, right_inverse, generator, basis_bound, depth, domain):
    S = ops.right_inverse(op) if right_inverse is None else right_inverse
    if domain is None:
        domain = op.domain or NATURALS
    field_ = _op_field(op)
    idx = _basis_indices(domain, basis_bound)
    basis = [FinVector.basis(i, domain, field_) for i in idx]
    seq = generator.take(depth)
    t_norms, s_norms = [], []
    for n in seq:
        t_norms.append(norm_max(ops.apply_power(op, n, e).sup_norm() for e in basis))
        s_vals = [_safe_norm(ops.apply_power(S, n, e)) for e in basis]
        s_norms.append(None if any(v is None for v in s_vals) else norm_max(s_vals))
    exact, note = _verify_identity(op, S, basis, seq[-1])
    return S, idx, seq, t_norms, s_norms, exact, note


def _no_right_inverse(op, prop, gen, depth, max_threshold) -> CriterionReport | None:
    """A failed report when ``op`` has no right inverse on c0 to serve as ``S``."""
    try:
        ops.right_inverse(op)
    except Unsupported as exc:
        cond = Condition("right inverse S exists", [], {}, False, str(exc))
        return CriterionReport(op.describe(), prop, gen.take(depth), [0], depth, max_threshold, [cond],
                               False, "no right inverse", False, gen.description)
    return None


def _op_field(op):
    if isinstance(op, (ops.BilateralBackwardShift, ops.UnilateralBackwardShift, ops.ForwardShift)):
        return op.weights.field
    if isinstance(op, (ops.LambdaMu, ops.RightInverseLambdaMu)):
        return op.lam.field
    if isinstance(op, ops.ScalarMul):
        return op.lam.field
    raise Unsupported(f"cannot build basis vectors for {op.describe()} without a field")


def verify_hc_criterion(op, right_inverse=None, generator: SubsequenceGenerator | None = None,
                        basis_bound: int = 20, depth: int = 40, max_threshold: int = 20,
                        domain: IndexDomain | None = None) -> CriterionReport:
    """Certify the three conditions of the Hypercyclic Criterion on the basis of c00.

    (1) ``T^{n_k} e_i -> 0``, (2) ``S^{n_k} e_i -> 0``, (3) ``T^{n_k} S^{n_k} e_i = e_i`` exactly.
    """
    gen = generator or _default_generator(op, Property.HYPERCYCLIC)
    if right_inverse is None and (bad := _no_right_inverse(op, Property.HYPERCYCLIC, gen, depth, max_threshold)):
        return bad
    S, idx, seq, t_norms, s_norms, exact, note = _criterion_data(op, right_inverse, gen, basis_bound, depth, domain)
    c1 = tends_to_zero(t_norms, max_threshold)
    c2 = tends_to_zero(s_norms, max_threshold)
    conds = [
        Condition("T^n_k x -> 0", t_norms, c1, all(v is not None for v in c1.values())),
        Condition("S_n_k y -> 0", s_norms, c2, all(v is not None for v in c2.values()),
                  "" if all(v is not None for v in s_norms) else "S maps some basis vector outside c0"),
    ]
    passed = all(c.passed for c in conds) and exact
    return CriterionReport(op.describe(), Property.HYPERCYCLIC, seq, idx, depth, max_threshold, conds,
                           exact, note, passed, gen.description)


def verify_sc_criterion(op, right_inverse=None, generator: SubsequenceGenerator | None = None,
                        basis_bound: int = 20, depth: int = 40, max_threshold: int = 20,
                        domain: IndexDomain | None = None) -> CriterionReport:
    """Certify the Supercyclic Criterion: ``||T^{n_k} x|| ||S_{n_k} y|| -> 0`` and exact (2)."""
    gen = generator or _default_generator(op, Property.SUPERCYCLIC)
    if right_inverse is None and (bad := _no_right_inverse(op, Property.SUPERCYCLIC, gen, depth, max_threshold)):
        return bad
    S, idx, seq, t_norms, s_norms, exact, note = _criterion_data(op, right_inverse, gen, basis_bound, depth, domain)
    prods = [None if s is None else t * s for t, s in zip(t_norms, s_norms)]
    c1 = tends_to_zero(prods, max_threshold)
    conds = [Condition("||T^n_k x|| ||S_n_k y|| -> 0", prods, c1, all(v is not None for v in c1.values()),
                       "" if all(v is not None for v in prods) else "S maps some basis vector outside c0")]
    passed = conds[0].passed and exact
    return CriterionReport(op.describe(), Property.SUPERCYCLIC, seq, idx, depth, max_threshold, conds,
                           exact, note, passed, gen.description)


# -- transitivity -------------------------------------------------------------------


@dataclass
class TransitivityWitness:
    n: int
    z: object
    image: object
    U: Ball
    V: Ball
    in_U: bool
    in_V: bool

    @property
    def verified(self) -> bool:
        return self.in_U and self.in_V

    def to_record(self) -> dict:
        return {
            "record": "witness",
            "n": self.n,
            "z": _vec_repr(self.z),
            "image": _vec_repr(self.image),
            "dist_z_U": _exp(ops_dist(self.U.center, self.z)),
            "dist_image_V": _exp(ops_dist(self.V.center, self.image)),
            "in_U": self.in_U,
            "in_V": self.in_V,
        }


def ops_dist(a, b):
    return (b - a).sup_norm()


def _vec_repr(v) -> str:
    return v.to_literal() or "0"


def _within(norm: NormExp | None, ball: Ball) -> bool:
    if norm is None:
        return False
    return norm <= ball.radius if ball.closed else norm < ball.radius


def transitivity_witness(op, U: Ball, V: Ball, n_max: int = 1000, right_inverse=None) -> TransitivityWitness:
    """Find ``n`` and ``z in U`` with ``T^n z in V`` using ``z = c_U + S^n c_V``.

    Since ``T^n S^n = I`` exactly, ``T^n z - c_V = T^n c_U``; the search stops
    at the first ``n`` with ``||S^n c_V||`` within U's radius and ``||T^n c_U||``
    within V's.  The returned witness is re-verified from scratch.
    """
    if U.domain is not V.domain:
        raise WrongDomain("balls in different sequence spaces")
    S = ops.right_inverse(op) if right_inverse is None else right_inverse
    tx, sy = U.center, V.center
    for n in range(n_max + 1):
        if n:
            tx = ops.apply(op, tx)
            sy = ops.apply(S, sy)
        if _within(_safe_norm(sy), U) and _within(tx.sup_norm(), V):
            z = U.center + sy
            image = ops.apply_power(op, n, z)
            w = TransitivityWitness(n, z, image, U, V, U.contains(z), V.contains(image))
            if not w.verified:
                raise AssertionError(f"witness at n = {n} failed re-verification")
            return w
    raise NotFound(n_max)


# -- scaling sequence (discrete value group) -------------------------------------------


def _norm_of(v) -> NormExp:
    return v if isinstance(v, NormExp) else v.sup_norm()


def _check_decay(products: list[NormExp]):
    if not products:
        raise HypothesisViolated("empty sequence")
    tail = []
    best = ZERO
    for q in reversed(products):
        best = max(best, q)
        tail.append(best)
    tail.reverse()
    if tail[-1].is_zero or tail[-1] < tail[0]:
        return
    raise HypothesisViolated("||x_n|| ||y_n|| does not decay along the given pairs")


def scaling_sequence(pairs) -> list[int]:
    """Exponents ``alpha_n`` so that ``|lambda_n| = p**-alpha_n`` scales ``x_n`` down and ``y_n`` up.

    With ``lambda_n = p**alpha_n`` both ``lambda_n x_n`` and ``lambda_n^-1 y_n``
    tend to zero whenever ``||x_n|| ||y_n||`` does.  Items of ``pairs`` are
    vectors or bare :class:`NormExp` values; ``n`` counts from 1.
    """
    norms = [(_norm_of(x), _norm_of(y)) for x, y in pairs]
    _check_decay([nx * ny for nx, ny in norms])
    alphas = []
    for n, (nx, ny) in enumerate(norms, start=1):
        if nx.is_zero and ny.is_zero:
            alphas.append(0)
        elif nx.is_zero:
            # |nu| = ||y|| / r**n
            alphas.append(-(ny.exponent + n))
        elif ny.is_zero:
            # |nu| = r**n / ||x||
            alphas.append(n + nx.exponent)
        else:
            # r**(2 alpha) <= ||y||/||x|| <= r**(2 alpha - 2), r = 1/p
            alphas.append(-((ny.exponent - nx.exponent) // 2))
    return alphas


def scaled_norms(pairs, alphas: list[int]) -> list[tuple[NormExp, NormExp]]:
    """``(||lambda_n x_n||, ||lambda_n^-1 y_n||)`` for ``|lambda_n| = p**-alpha_n``."""
    out = []
    for (x, y), a in zip(pairs, alphas):
        out.append((_norm_of(x) * NormExp(-a), _norm_of(y) * NormExp(a)))
    return out


# -- obstructions -----------------------------------------------------------------


@dataclass
class ObstructionWitness:
    operator: str
    vector: FinVector
    case: str
    index: int
    target: int
    n_max: int
    rows: list = field(default_factory=list)
    holds: bool = True
    statement: str = ""

    def to_records(self) -> list[dict]:
        head = {"record": "obstruction", "operator": self.operator, "vector": _vec_repr(self.vector),
                "case": self.case, "index": self.index, "target_basis": self.target,
                "n_max": self.n_max, "holds": self.holds, "statement": self.statement}
        return [head] + [{"record": "obstruction-step", **r} for r in self.rows]


def _dominant_index(x: FinVector) -> int:
    """Least k with ``|x_k| > |x_m|`` for every ``m > k``."""
    best_after = ZERO
    k = None
    for i in reversed(x.support):
        nrm = x[i].norm()
        if best_after < nrm:
            k = i
        best_after = max(best_after, nrm)
    # k now holds the smallest index that beat everything after it
    return k


def obstruction_witness_lambda_mu(lam: PadicScalar, mu: PadicScalar, x: FinVector, n_max: int = 100
                                  ) -> ObstructionWitness:
    """Certify the exact norm identities that keep every projective orbit of ``x`` off a unit ball."""
    if x.is_zero:
        raise ZeroVector("the obstruction needs a nonzero vector")
    if lam.is_zero and mu.is_zero:
        raise ParameterViolation("lambda and mu are both zero")
    op = ops.LambdaMu(lam, mu, x.domain)
    traj = orbit(op, x, n_max)
    if lam.valuation <= mu.valuation:
        k = _dominant_index(x)
        xk = x[k].norm()
        w = ObstructionWitness(op.describe(), x, "|lambda| >= |mu|", k, k + 1, n_max,
                               statement=(f"for all alpha: ||alpha T^n x - e_{k+1}|| >= 1, because "
                                          f"|x_k^(n)| > |x_(k+1)^(n)| forces either |alpha x_k^(n)| >= 1 "
                                          f"or |alpha x_(k+1)^(n) - 1| = 1"))
        for n, y, _ in traj:
            target = lam.norm() ** n * xk
            a, b = y[k].norm(), y[k + 1].norm() if x.domain.contains(k + 1) else ZERO
            row = {"n": n, "abs_xk": _exp(a), "abs_xk1": _exp(b), "lambda_n_xk": _exp(target),
                   "identity": a == target, "strict": b < target}
            row["distance_bound"] = row["identity"] and row["strict"]
            w.holds &= row["distance_bound"]
            w.rows.append(row)
        return w
    if x.domain is not INTEGERS:
        raise WrongDomain("the |mu| > |lambda| obstruction lives on c0(Z)")
    top = x.sup_norm()
    hits = [i for i in x.support if x[i].norm() == top]
    ell, m = hits[0], hits[-1]
    w = ObstructionWitness(op.describe(), x, "|mu| > |lambda|", ell, m + 1, n_max,
                           statement=(f"for all beta: ||beta T^n x - e_{m+1}|| >= 1, because "
                                      f"|x_(l-n)^(n)| > |x_i^(n)| for every i > m"))
    for n, y, _ in traj:
        target = mu.norm() ** n * top
        a = y[ell - n].norm()
        beyond = norm_max(y[i].norm() for i in y.support if i > m)
        row = {"n": n, "abs_x_l_minus_n": _exp(a), "max_beyond_m": _exp(beyond), "mu_n_xl": _exp(target),
               "identity": a == target, "strict": beyond < target}
        row["distance_bound"] = row["identity"] and row["strict"]
        w.holds &= row["distance_bound"]
        w.rows.append(row)
    return w


@dataclass
class OpenSetReport:
    lam: PadicScalar
    mu: PadicScalar
    ratio_exponent: int
    k_max: int
    samples: list
    rows: list
    holds: bool

    def to_records(self) -> list[dict]:
        head = {"record": "open-set-check", "lambda": str(self.lam), "mu": str(self.mu),
                "log_r": -self.ratio_exponent, "k_max": self.k_max, "holds": self.holds,
                "samples": [_vec_repr(s) for s in self.samples]}
        return [head] + [{"record": "open-set-step", **r} for r in self.rows]


def open_set_invariance_check(lam: PadicScalar, mu: PadicScalar, k_max: int = 6, samples: int = 5,
                          n_max: int = 10, seed: int = 0) -> OpenSetReport:
    """Check the open set ``U = {r^(3^k+2) < |x_k| < r^(3^k)}`` against ``V = B(e_2, 1^-)``.

    Here ``1 <= |lambda| < |mu|`` and ``r = |lambda|/|mu|``.  Sample vectors
    sit at ``|x_k| = r^(3^k+1)`` for ``k <= k_max`` (zero beyond).  For each
    the check confirms ``|lambda x_k + mu x_(k+1)| = |lambda x_k|``, that
    ``|(T^n x)_1| > |(T^n x)_2|``, and that ``T^n x`` misses V.
    """
    if lam.is_zero or mu.is_zero or not (lam.valuation <= 0 and lam.valuation > mu.valuation):
        raise ParameterViolation("needs 1 <= |lambda| < |mu|")
    field_ = lam.field
    p = field_.p
    d = lam.valuation - mu.valuation  # r = p**-d
    rng = random.Random(seed)
    op = ops.LambdaMu(lam, mu, NATURALS)
    V = Ball(FinVector.basis(2, NATURALS, field_), ONE_NORM, closed=False)
    vecs, rows, holds = [], [], True
    for s in range(samples):
        entries = {}
        for k in range(1, k_max + 1):
            u = rng.randrange(1, 10 * p)
            while u % p == 0:
                u = rng.randrange(1, 10 * p)
            entries[k] = field_.from_rational(u * rng.choice((1, -1))) * field_.uniformizer_power(d * (3 ** k + 1))
        x = FinVector(field_, NATURALS, entries)
        vecs.append(x)
        band = all(d * 3 ** k < x[k].valuation < d * (3 ** k + 2) for k in range(1, k_max + 1))
        dominance = all((lam * x[k] + mu * x[k + 1]).norm() == (lam * x[k]).norm() for k in range(1, k_max))
        for n, y, _ in orbit(op, x, n_max):
            order = y[2].norm() < y[1].norm()
            scaled = all(y[k].norm() == lam.norm() ** n * x[k].norm() for k in range(1, k_max + 1))
            miss = not V.contains(y)
            ok = band and dominance and order and scaled and miss
            holds &= ok
            rows.append({"sample": s, "n": n, "band": band, "dominance": dominance, "scaled_band": scaled,
                         "first_beats_second": order, "misses_V": miss})
    return OpenSetReport(lam, mu, d, k_max, vecs, rows, holds)


@dataclass
class FiniteDimReport:
    a: PadicScalar
    case: str
    checks: list
    holds: bool

    def to_records(self) -> list[dict]:
        return [{"record": "finite-dim", "a": str(self.a), "case": self.case, "holds": self.holds}] + \
            [{"record": "finite-dim-step", **c} for c in self.checks]


def finite_dim_obstruction(a: PadicScalar, n_bound: int = 20, samples: int = 8, seed: int = 0) -> FiniteDimReport:
    """Show ``{a^n}`` stays at distance > 1 from a whole region of K, so it is not dense."""
    if a.is_zero:
        raise ZeroScalar("det T = 0 cannot be the determinant of a hypercyclic operator")
    field_ = a.field
    p = field_.p
    rng = random.Random(seed)

    def sample(v):
        u = rng.randrange(1, 10 * p)
        while u % p == 0:
            u = rng.randrange(1, 10 * p)
        return field_.from_rational(u) * field_.uniformizer_power(v)

    checks, holds = [], True
    if a.norm() <= ONE_NORM:
        case = "|a| <= 1: powers avoid every |z| > 1"
        pts = [sample(-rng.randint(1, 4)) for _ in range(samples)]
        ns = range(0, n_bound + 1)
    else:
        case = "|a| > 1: powers avoid every |w| <= 1"
        pts = [field_.zero] + [sample(rng.randint(0, 4)) for _ in range(samples - 1)]
        ns = range(1, n_bound + 1)
    for z in pts:
        for n in ns:
            dist = (a ** n - z).norm()
            ok = ONE_NORM < dist
            holds &= ok
            checks.append({"n": n, "z": str(z), "dist": _exp(dist), "greater_than_one": ok})
    return FiniteDimReport(a, case, checks, holds)
