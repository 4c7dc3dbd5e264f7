"""Operators on c0: weighted shifts, lambda*I + mu*B and its right inverse.

Weight sequences are described finitely as an explicit prefix followed by a
periodic tail (separately for the forward indices ``1, 2, ...`` and, on Z,
the backward indices ``0, -1, -2, ...``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .errors import DivisionByZero, DomainMismatch, IndexOutOfDomain, NotInC0, Unsupported, WrongDomain
from .field import ONE_NORM, NormExp, PadicField, PadicScalar, binomial, norm_max
from .seq import INTEGERS, NATURALS, FinVector, IndexDomain, RationalSeq, rational_seq


@dataclass(frozen=True)
class WeightModel:
    """A bounded weight sequence ``a`` given as prefix + periodic tail.

    Forward part: ``a_1, a_2, ...``.  Backward part (Z only): ``a_0, a_-1, ...``.
    """

    domain: IndexDomain
    prefix: tuple
    period: tuple
    backward_prefix: tuple = ()
    backward_period: tuple = ()

    def __post_init__(self):
        if not self.period:
            raise ValueError("forward period must be nonempty")
        if self.domain is INTEGERS and not self.backward_period:
            raise ValueError("bilateral weights need a nonempty backward period")
        if self.domain is NATURALS and (self.backward_prefix or self.backward_period):
            raise ValueError("unilateral weights have no backward part")
        all_w = self.prefix + self.period + self.backward_prefix + self.backward_period
        fields = {w.field for w in all_w}
        if len(fields) != 1:
            raise ValueError("weights must share one field")
        if any(w.is_zero for w in all_w):
            raise ValueError("zero weight: weights must be nonzero")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_values(cls, field: PadicField, domain: IndexDomain, prefix=(), period=(1,),
                    backward_prefix=(), backward_period=None) -> "WeightModel":
        if backward_period is None:
            backward_period = (1,) if domain is INTEGERS else ()
        conv = lambda seq: tuple(field(x) for x in seq)
        return cls(domain, conv(prefix), conv(period), conv(backward_prefix), conv(backward_period))

    @classmethod
    def from_valuations(cls, field: PadicField, domain: IndexDomain, prefix=(), period=(0,),
                        backward_prefix=(), backward_period=None) -> "WeightModel":
        """Weights ``p**v`` for the given valuation lists."""
        if backward_period is None:
            backward_period = (0,) if domain is INTEGERS else ()
        conv = lambda seq: tuple(field.uniformizer_power(int(v)) for v in seq)
        return cls(domain, conv(prefix), conv(period), conv(backward_prefix), conv(backward_period))

    @classmethod
    def constant(cls, field: PadicField, domain: IndexDomain, c=1) -> "WeightModel":
        return cls.from_values(field, domain, (), (c,), (), (c,) if domain is INTEGERS else ())

    # -- lookup --------------------------------------------------------------------

    @property
    def field(self) -> PadicField:
        return self.period[0].field

    def weight_at(self, n: int) -> PadicScalar:
        if n >= 1:
            k = n - 1
            pre, per = self.prefix, self.period
        else:
            if self.domain is NATURALS:
                raise IndexOutOfDomain(f"unilateral weights start at a_1, got a_{n}")
            k = -n
            pre, per = self.backward_prefix, self.backward_period
        if k < len(pre):
            return pre[k]
        return per[(k - len(pre)) % len(per)]

    def valuation_at(self, n: int) -> int:
        return self.weight_at(n).valuation

    def product(self, lo: int, hi: int) -> PadicScalar:
        """``prod_{t=lo}^{hi} a_t`` (1 when ``lo > hi``), using whole periods as powers."""
        out = self.field.one
        if lo > hi:
            return out
        if hi >= 1:
            out = out * _cyclic_product(self.prefix, self.period, max(lo, 1) - 1, hi - 1)
        if lo <= 0:
            if self.domain is NATURALS:
                raise IndexOutOfDomain(f"unilateral weights start at a_1, got a_{lo}")
            out = out * _cyclic_product(self.backward_prefix, self.backward_period, -min(hi, 0), -lo)
        return out

    def distinct_weights(self) -> tuple:
        return self.prefix + self.period + self.backward_prefix + self.backward_period

    def sup_norm(self) -> NormExp:
        return norm_max(w.norm() for w in self.distinct_weights())

    def scaled(self, c) -> "WeightModel":
        c = self.field(c)
        if c.is_zero:
            raise ValueError("zero weight: scaling by zero")
        mul = lambda seq: tuple(c * w for w in seq)
        return WeightModel(self.domain, mul(self.prefix), mul(self.period),
                           mul(self.backward_prefix), mul(self.backward_period))

    def __add__(self, other: "WeightModel") -> "WeightModel":
        """Entrywise sum ``(a_n + b_n)``, as another prefix + period model."""
        if other.domain is not self.domain:
            raise DomainMismatch("weight models on different domains")

        def combine(pa, qa, pb, qb, sign):
            lp = max(len(pa), len(pb))
            lq = math.lcm(len(qa), len(qb))
            idx = (lambda k: k + 1) if sign > 0 else (lambda k: -k)
            pre = tuple(self.weight_at(idx(k)) + other.weight_at(idx(k)) for k in range(lp))
            per = tuple(self.weight_at(idx(k)) + other.weight_at(idx(k)) for k in range(lp, lp + lq))
            return pre, per

        pre, per = combine(self.prefix, self.period, other.prefix, other.period, +1)
        bpre, bper = (), ()
        if self.domain is INTEGERS:
            bpre, bper = combine(self.backward_prefix, self.backward_period,
                                 other.backward_prefix, other.backward_period, -1)
        return WeightModel(self.domain, pre, per, bpre, bper)


def _cyclic_product(pre: tuple, per: tuple, k0: int, k1: int) -> PadicScalar:
    """Product of positions ``k0..k1`` of the sequence ``pre`` followed by ``per`` repeated."""
    out = per[0].field.one
    for k in range(k0, min(k1, len(pre) - 1) + 1):
        out = out * pre[k]
    start = max(k0, len(pre))
    if start > k1:
        return out
    count = k1 - start + 1
    full, rem = divmod(count, len(per))
    if full:
        cycle = per[0].field.one
        for w in per:
            cycle = cycle * w
        out = out * cycle ** full
    r0 = (start - len(pre)) % len(per)
    for j in range(rem):
        out = out * per[(r0 + j) % len(per)]
    return out


def weight_at(w: WeightModel, n: int) -> PadicScalar:
    return w.weight_at(n)


def conjugated_weight(a: WeightModel, n: int) -> PadicScalar:
    """``b_n`` with ``b_0 = 1`` and ``b_n / b_{n+1} = a_{n+1}``."""
    if a.domain is not INTEGERS:
        raise WrongDomain("weight conjugation is defined for bilateral weights")
    b = a.field.one
    if n > 0:
        for i in range(1, n + 1):
            b = b / a.weight_at(i)
    else:
        for j in range(1, -n + 1):
            b = b * a.weight_at(-j + 1)
    return b


# -- operator specifications --------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    domain = None

    def describe(self):
        return "I"


@dataclass(frozen=True)
class ScalarMul:
    lam: PadicScalar
    domain = None

    def describe(self):
        return f"({self.lam})*I"


@dataclass(frozen=True)
class BilateralBackwardShift:
    """``B_a e_n = a_n e_{n-1}`` on c0(Z)."""

    weights: WeightModel

    def __post_init__(self):
        if self.weights.domain is not INTEGERS:
            raise WrongDomain("bilateral shift needs weights over Z")

    @property
    def domain(self):
        return INTEGERS

    def describe(self):
        return "bilateral weighted backward shift"


@dataclass(frozen=True)
class UnilateralBackwardShift:
    """``B_a e_1 = 0``, ``B_a e_n = a_{n-1} e_{n-1}`` on c0(N)."""

    weights: WeightModel

    def __post_init__(self):
        if self.weights.domain is not NATURALS:
            raise WrongDomain("unilateral shift needs weights over N")

    @property
    def domain(self):
        return NATURALS

    def describe(self):
        return "unilateral weighted backward shift"


@dataclass(frozen=True)
class ForwardShift:
    """Right inverse of the backward shift with the same weights.

    On N: ``S e_n = a_n^{-1} e_{n+1}``.  On Z: ``S e_n = a_{n+1}^{-1} e_{n+1}``.
    """

    weights: WeightModel

    @property
    def domain(self):
        return self.weights.domain

    def describe(self):
        return "weighted forward shift"


@dataclass(frozen=True)
class LambdaMu:
    """``lambda*I + mu*B`` with ``B`` the unweighted backward shift."""

    lam: PadicScalar
    mu: PadicScalar
    domain: IndexDomain = NATURALS

    def describe(self):
        return f"({self.lam})*I + ({self.mu})*B on c0({self.domain.value})"


@dataclass(frozen=True)
class RightInverseLambdaMu:
    """``(Sx)_1 = 0``, ``(Sx)_i = mu^{-1} sum_{j=1}^{i-1} (-lambda/mu)^{j-1} x_{i-j}`` on c0(N)."""

    lam: PadicScalar
    mu: PadicScalar
    ratio: PadicScalar = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.mu.is_zero:
            raise DivisionByZero("the right inverse of lambda*I + mu*B needs mu != 0")
        object.__setattr__(self, "ratio", -self.lam / self.mu)

    @property
    def domain(self):
        return NATURALS

    def describe(self):
        return f"right inverse of ({self.lam})*I + ({self.mu})*B"


def forward_shift_bilateral(field: PadicField) -> ForwardShift:
    """The unweighted forward shift ``S e_i = e_{i+1}`` on c0(Z)."""
    return ForwardShift(WeightModel.constant(field, INTEGERS))


OperatorSpec = (Identity | ScalarMul | BilateralBackwardShift | UnilateralBackwardShift
                | ForwardShift | LambdaMu | RightInverseLambdaMu)


def _check_domain(op, x):
    if op.domain is not None and x.domain is not op.domain:
        raise DomainMismatch(f"{op.describe()} acts on {op.domain.name}, vector is over {x.domain.name}")


def _finite(op, x) -> FinVector:
    if isinstance(x, RationalSeq):
        raise Unsupported(f"{op.describe()} is only implemented on finitely supported vectors")
    return x


def apply(op, x):
    """The image ``op(x)``."""
    _check_domain(op, x)
    if isinstance(op, Identity):
        return x
    if isinstance(op, ScalarMul):
        return x.scale(op.lam)
    if isinstance(op, LambdaMu):
        if isinstance(x, RationalSeq):
            return x.scale(op.lam) + x.backward_shift().scale(op.mu)
        return x.scale(op.lam) + x.shifted(-1).scale(op.mu)
    if isinstance(op, RightInverseLambdaMu):
        return _right_inverse_power(op, 1, x)
    x = _finite(op, x)
    w = op.weights
    if isinstance(op, BilateralBackwardShift):
        out = {i - 1: w.weight_at(i) * a for i, a in x.items()}
    elif isinstance(op, UnilateralBackwardShift):
        out = {i - 1: w.weight_at(i - 1) * a for i, a in x.items() if i >= 2}
    elif isinstance(op, ForwardShift):
        off = 0 if w.domain is NATURALS else 1
        out = {i + 1: a / w.weight_at(i + off) for i, a in x.items()}
    else:
        raise Unsupported(f"unknown operator {op!r}")
    return FinVector._raw(x.field, x.domain, out)


def _right_inverse_power(op: RightInverseLambdaMu, n: int, x):
    if isinstance(x, RationalSeq):
        if x.ratio != op.ratio:
            raise Unsupported("right inverse applied to a sequence with a different pole")
        num, d = x.numerator, x.power
    else:
        num, d = x, 0
    return rational_seq(num.shifted(n).scale(op.mu ** (-n)), op.ratio, d + n)


def apply_power(op, n: int, x):
    """``op**n (x)``, in closed form where one is available."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_domain(op, x)
    if n == 0 or isinstance(op, Identity):
        return x
    if isinstance(op, ScalarMul):
        return x.scale(op.lam ** n)
    if isinstance(op, RightInverseLambdaMu):
        return _right_inverse_power(op, n, x)
    if isinstance(op, LambdaMu):
        if isinstance(x, RationalSeq):
            for _ in range(n):
                x = apply(op, x)
            return x
        return _lambda_mu_power(op, n, x)
    x = _finite(op, x)
    w = op.weights
    out = {}
    for i, a in x.items():
        if isinstance(op, BilateralBackwardShift):
            out[i - n] = a * w.product(i - n + 1, i)
        elif isinstance(op, UnilateralBackwardShift):
            if i - n >= 1:
                out[i - n] = a * w.product(i - n, i - 1)
        elif isinstance(op, ForwardShift):
            off = 0 if w.domain is NATURALS else 1
            out[i + n] = a / w.product(i + off, i + off + n - 1)
        else:
            raise Unsupported(f"unknown operator {op!r}")
    return FinVector._raw(x.field, x.domain, out)


def _lambda_mu_power(op: LambdaMu, n: int, x: FinVector) -> FinVector:
    # (T^n x)_i = sum_j C(n, j) lambda^(n-j) mu^j x_{i+j}
    field = x.field
    coeffs = []
    j_top = n if x.domain is not NATURALS or x.is_zero else min(n, x.max_index() - 1)
    for j in range(j_top + 1):
        c = binomial(n, j, field) * op.lam ** (n - j) * op.mu ** j
        if not c.is_zero:
            coeffs.append((j, c))
    out: dict = {}
    for s, a in x.items():
        for j, c in coeffs:
            i = s - j
            if not x.domain.contains(i):
                break
            term = c * a
            cur = out.get(i)
            out[i] = term if cur is None else cur + term
    return FinVector._raw(field, x.domain, {i: a for i, a in out.items() if not a.is_zero})


def right_inverse_apply(lam: PadicScalar, mu: PadicScalar, x):
    """``S_{mu,lambda} x``; satisfies ``(lambda I + mu B) S x = x`` exactly."""
    if x.domain is not NATURALS:
        raise DomainMismatch("the right inverse acts on c0(N)")
    return apply(RightInverseLambdaMu(lam, mu), x)


def right_inverse(op):
    """The right inverse used by the criteria for ``op``'s family."""
    if isinstance(op, Identity):
        return op
    if isinstance(op, ScalarMul):
        if op.lam.is_zero:
            raise Unsupported("the zero operator has no right inverse")
        return ScalarMul(op.lam.inverse())
    if isinstance(op, (BilateralBackwardShift, UnilateralBackwardShift)):
        return ForwardShift(op.weights)
    if isinstance(op, LambdaMu):
        if op.domain is not NATURALS:
            raise Unsupported("no right inverse is constructed for lambda*I + mu*B on c0(Z)")
        if op.mu.is_zero:
            raise Unsupported("lambda*I has no right inverse of the required form when mu = 0")
        return RightInverseLambdaMu(op.lam, op.mu)
    raise Unsupported(f"no right inverse is constructed for {op.describe()}")


def operator_norm(op) -> NormExp:
    if isinstance(op, Identity):
        return ONE_NORM
    if isinstance(op, ScalarMul):
        return op.lam.norm()
    if isinstance(op, (BilateralBackwardShift, UnilateralBackwardShift)):
        return op.weights.sup_norm()
    if isinstance(op, ForwardShift):
        return norm_max(w.inverse().norm() for w in op.weights.distinct_weights())
    if isinstance(op, LambdaMu):
        return max(op.lam.norm(), op.mu.norm())
    if isinstance(op, RightInverseLambdaMu):
        if op.ratio.is_zero or op.ratio.valuation > 0:
            return op.mu.inverse().norm()
        raise NotInC0("|lambda| >= |mu|: the right inverse does not map c00 into c0")
    raise Unsupported(f"unknown operator {op!r}")
