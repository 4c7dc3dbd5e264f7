"""Sequences in c0(N) and c0(Z): finitely supported vectors, balls, sup norms.

:class:`FinVector` is the workhorse (elements of c00).  The right inverse of
``lambda*I + mu*B`` does not preserve finite support, so :class:`RationalSeq`
covers the sequences it produces: those whose generating function
``sum x_i z**i`` is ``P(z) / (1 - rho*z)**d`` with ``P`` a polynomial.  They
are closed under the backward shift, ``lambda*I + mu*B`` and its right inverse,
and their sup norm is exactly computable when ``|rho| < 1``.
"""
from __future__ import annotations

import enum
import math
from typing import Iterable, Mapping

from .errors import DomainMismatch, FieldMismatch, IndexOutOfDomain, NotInC0, ParseError, Unsupported
from .field import ZERO, NormExp, PadicField, PadicScalar, norm_max


class IndexDomain(enum.Enum):
    NATURALS = "N"
    INTEGERS = "Z"

    def check(self, index: int):
        if self is IndexDomain.NATURALS and index < 1:
            raise IndexOutOfDomain(f"index {index} is not in N = {{1, 2, ...}}")

    def contains(self, index: int) -> bool:
        return self is IndexDomain.INTEGERS or index >= 1

    @classmethod
    def parse(cls, text: str) -> "IndexDomain":
        t = text.strip().upper()
        if t in ("N", "NATURALS", "NAT"):
            return cls.NATURALS
        if t in ("Z", "INTEGERS", "INT"):
            return cls.INTEGERS
        raise ValueError(f"unknown index domain {text!r}")


NATURALS = IndexDomain.NATURALS
INTEGERS = IndexDomain.INTEGERS


class FinVector:
    """A finitely supported sequence. Zero entries are never stored."""

    __slots__ = ("field", "domain", "_entries", "_hash")

    def __init__(self, field: PadicField, domain: IndexDomain, entries: Mapping[int, PadicScalar] | Iterable = ()):
        self.field = field
        self.domain = domain
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean = {}
        for i, a in items:
            i = int(i)
            domain.check(i)
            a = field(a)
            if not a.is_zero:
                clean[i] = a
        self._entries = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, field, domain, entries: dict) -> "FinVector":
        # entries: nonzero, in-domain; sorted here
        self = object.__new__(cls)
        self.field = field
        self.domain = domain
        self._entries = dict(sorted(entries.items()))
        self._hash = None
        return self

    @classmethod
    def zero(cls, field: PadicField, domain: IndexDomain) -> "FinVector":
        return cls._raw(field, domain, {})

    @classmethod
    def basis(cls, n: int, domain: IndexDomain, field: PadicField) -> "FinVector":
        domain.check(n)
        return cls._raw(field, domain, {n: field.one})

    @classmethod
    def from_literal(cls, text: str, field: PadicField, domain: IndexDomain) -> "FinVector":
        return parse_vector(text, field, domain)

    # -- queries ---------------------------------------------------------

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._entries)

    @property
    def is_zero(self) -> bool:
        return not self._entries

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, i: int) -> PadicScalar:
        a = self._entries.get(i)
        return self.field.zero if a is None else a

    def items(self):
        return self._entries.items()

    def min_index(self) -> int:
        return next(iter(self._entries))

    def max_index(self) -> int:
        return next(reversed(self._entries))

    def sup_norm(self) -> NormExp:
        return norm_max(a.norm() for a in self._entries.values())

    def coefficient(self, i: int) -> PadicScalar:
        return self[i]

    # -- linear structure -------------------------------------------------

    def _check(self, other: "FinVector"):
        if other.domain is not self.domain:
            raise DomainMismatch(f"{self.domain.name} vs {other.domain.name}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        if isinstance(other, RationalSeq):
            return other + self
        if not isinstance(other, FinVector):
            return NotImplemented
        self._check(other)
        out = dict(self._entries)
        for i, b in other._entries.items():
            a = out.get(i)
            if a is None:
                out[i] = b
            else:
                s = a + b
                if s.is_zero:
                    del out[i]
                else:
                    out[i] = s
        return FinVector._raw(self.field, self.domain, out)

    def __neg__(self):
        return FinVector._raw(self.field, self.domain, {i: -a for i, a in self._entries.items()})

    def __sub__(self, other):
        if not isinstance(other, (FinVector, RationalSeq)):
            return NotImplemented
        return self + (-other)

    def scale(self, lam) -> "FinVector":
        lam = self.field(lam)
        if lam.is_zero:
            return FinVector.zero(self.field, self.domain)
        return FinVector._raw(self.field, self.domain, {i: lam * a for i, a in self._entries.items()})

    def __rmul__(self, lam):
        if isinstance(lam, (PadicScalar, int)):
            return self.scale(lam)
        return NotImplemented

    def shifted(self, k: int) -> "FinVector":
        """Translate indices by ``k`` (``e_i -> e_{i+k}``), dropping indices that leave the domain."""
        return FinVector._raw(
            self.field, self.domain,
            {i + k: a for i, a in self._entries.items() if self.domain.contains(i + k)},
        )

    def truncated(self, lo: int | None = None, hi: int | None = None) -> "FinVector":
        return FinVector._raw(
            self.field, self.domain,
            {i: a for i, a in self._entries.items() if (lo is None or i >= lo) and (hi is None or i <= hi)},
        )

    def __eq__(self, other):
        if isinstance(other, RationalSeq):
            return False
        if not isinstance(other, FinVector):
            return NotImplemented
        return self.domain is other.domain and self.field == other.field and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, tuple(self._entries.items())))
        return self._hash

    def to_literal(self) -> str:
        return format_vector(self)

    def __repr__(self):
        return f"FinVector({self.domain.value}, {format_vector(self) or '0'})"


def _poly_mul_q_power(P: dict, rho: PadicScalar, e: int) -> dict:
    """Coefficients of ``P(z) * (1 - rho z)**e``."""
    if e == 0 or rho.is_zero:
        return dict(P)
    field = rho.field
    q = [field.from_rational(math.comb(e, t) * (-1) ** t) * rho ** t for t in range(e + 1)]
    out: dict[int, PadicScalar] = {}
    for s, a in P.items():
        for t, c in enumerate(q):
            term = a * c
            if term.is_zero:
                continue
            cur = out.get(s + t)
            out[s + t] = term if cur is None else cur + term
    return {i: a for i, a in out.items() if not a.is_zero}


def _divide_once(P: dict, rho: PadicScalar) -> dict | None:
    """``P / (1 - rho z)`` if the division is exact, else None."""
    if not P:
        return {}
    lo, hi = min(P), max(P)
    zero = rho.field.zero
    out = {}
    prev = zero
    for k in range(lo, hi + 1):
        cur = P.get(k, zero) + rho * prev
        if k == hi:
            return out if cur.is_zero else None
        if not cur.is_zero:
            out[k] = cur
        prev = cur
    return None


class RationalSeq:
    """A sequence over N with generating function ``P(z) / (1 - rho z)**d``, ``d >= 1``.

    Always built through :func:`rational_seq`, which cancels common factors and
    falls back to :class:`FinVector` when nothing is left in the denominator.
    """

    __slots__ = ("field", "numerator", "ratio", "power")

    domain = NATURALS

    def __init__(self, numerator: FinVector, ratio: PadicScalar, power: int):
        self.field = numerator.field
        self.numerator = numerator
        self.ratio = ratio
        self.power = power

    @property
    def is_zero(self) -> bool:
        return False

    def coefficient(self, i: int) -> PadicScalar:
        NATURALS.check(i)
        d, rho = self.power, self.ratio
        total = self.field.zero
        for s, a in self.numerator.items():
            if s > i:
                break
            t = i - s
            total = total + a * self.field.from_rational(math.comb(t + d - 1, d - 1)) * rho ** t
        return total

    def __getitem__(self, i: int) -> PadicScalar:
        return self.coefficient(i)

    def head(self, n: int) -> FinVector:
        """The first ``n`` coefficients as a finitely supported vector."""
        return FinVector._raw(
            self.field, NATURALS,
            {i: c for i in range(1, n + 1) if not (c := self.coefficient(i)).is_zero},
        )

    def in_c0(self) -> bool:
        return self.ratio.valuation > 0

    def sup_norm(self) -> NormExp:
        if not self.in_c0():
            raise NotInC0(f"|rho| = {self.ratio.norm()} >= 1: the entries do not tend to zero")
        vr = self.ratio.valuation
        P = self.numerator
        hi = P.max_index()
        # |x_i| <= p**(c - vr*i) with c = max_s (-v(P_s) + vr*s)
        c = max(-a.valuation + vr * s for s, a in P.items())
        best = ZERO
        i = P.min_index()
        while True:
            if i > hi and not best < NormExp(c - vr * i):
                return best
            x = self.coefficient(i)
            if not x.is_zero and best < x.norm():
                best = x.norm()
            i += 1

    # -- linear structure ------------------------------------------------

    def _lift(self, other) -> tuple[dict, dict, int]:
        if isinstance(other, FinVector):
            if other.domain is not NATURALS:
                raise DomainMismatch("rational sequences live on N")
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            o_num, o_pow = dict(other.items()), 0
        elif isinstance(other, RationalSeq):
            if other.ratio != self.ratio:
                raise Unsupported("sums of rational sequences with different poles")
            o_num, o_pow = dict(other.numerator.items()), other.power
        else:
            return NotImplemented
        d = max(self.power, o_pow)
        a = _poly_mul_q_power(dict(self.numerator.items()), self.ratio, d - self.power)
        b = _poly_mul_q_power(o_num, self.ratio, d - o_pow)
        return a, b, d

    def __add__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return lifted
        a, b, d = lifted
        out = dict(a)
        for i, y in b.items():
            x = out.get(i)
            if x is None:
                out[i] = y
            else:
                s = x + y
                if s.is_zero:
                    del out[i]
                else:
                    out[i] = s
        return rational_seq(FinVector._raw(self.field, NATURALS, out), self.ratio, d)

    __radd__ = __add__

    def __neg__(self):
        return RationalSeq(-self.numerator, self.ratio, self.power)

    def __sub__(self, other):
        if not isinstance(other, (FinVector, RationalSeq)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, FinVector):
            return NotImplemented
        return (-self) + other

    def scale(self, lam):
        lam = self.field(lam)
        if lam.is_zero:
            return FinVector.zero(self.field, NATURALS)
        return RationalSeq(self.numerator.scale(lam), self.ratio, self.power)

    def __rmul__(self, lam):
        if isinstance(lam, (PadicScalar, int)):
            return self.scale(lam)
        return NotImplemented

    def backward_shift(self):
        """The unweighted backward shift ``(Bx)_i = x_{i+1}``."""
        P = dict(self.numerator.items())
        first = P.get(1)
        if first is not None:
            # (P - P_1 z Q^d) / z
            corr = _poly_mul_q_power({1: -first}, self.ratio, self.power)
            for i, y in corr.items():
                x = P.get(i)
                s = y if x is None else x + y
                if s.is_zero:
                    P.pop(i, None)
                else:
                    P[i] = s
        shifted = {i - 1: a for i, a in P.items()}
        return rational_seq(FinVector._raw(self.field, NATURALS, shifted), self.ratio, self.power)

    def __eq__(self, other):
        if isinstance(other, FinVector):
            return False
        if not isinstance(other, RationalSeq):
            return NotImplemented
        return (self.numerator, self.ratio, self.power) == (other.numerator, other.ratio, other.power)

    def __hash__(self):
        return hash((self.numerator, self.ratio, self.power))

    def to_literal(self) -> str:
        """``"(i:num/den ...) / (1 - (rho) z)^d"``, coefficients of ``z^i`` giving entry ``i``."""
        return f"({format_vector(self.numerator)}) / (1 - ({self.ratio}) z)^{self.power}"

    def __repr__(self):
        return f"RationalSeq(({format_vector(self.numerator)}) / (1 - ({self.ratio}) z)^{self.power})"


def rational_seq(numerator: FinVector, ratio: PadicScalar, power: int):
    """Canonical form of ``numerator(z) / (1 - ratio z)**power``."""
    if power < 0:
        raise ValueError("power must be non-negative")
    if ratio.is_zero or numerator.is_zero:
        return numerator
    P = dict(numerator.items())
    while power > 0:
        R = _divide_once(P, ratio)
        if R is None:
            break
        P = R
        power -= 1
    num = FinVector._raw(numerator.field, NATURALS, P)
    if power == 0:
        return num
    return RationalSeq(num, ratio, power)


Vector = FinVector | RationalSeq


def sup_norm(x: Vector) -> NormExp:
    return x.sup_norm()


def vec_add(x: Vector, y: Vector) -> Vector:
    return x + y


def vec_scale(lam: PadicScalar, x: Vector) -> Vector:
    return x.scale(lam)


def basis(n: int, domain: IndexDomain, field: PadicField) -> FinVector:
    return FinVector.basis(n, domain, field)


def dist(x: Vector, y: Vector) -> NormExp:
    if x.domain is not y.domain:
        raise DomainMismatch(f"{x.domain.name} vs {y.domain.name}")
    return (x - y).sup_norm()


class Ball:
    """``B(center, p**e)`` (closed) or ``B(center, (p**e)^-)`` (open) in the sup norm."""

    __slots__ = ("center", "radius", "closed")

    def __init__(self, center: FinVector, radius: NormExp | int, closed: bool = True):
        if isinstance(radius, int):
            radius = NormExp(radius)
        if radius.is_zero:
            raise ValueError("ball radius must be nonzero")
        self.center = center
        self.radius = radius
        self.closed = closed

    @property
    def domain(self):
        return self.center.domain

    def contains(self, x: Vector) -> bool:
        d = dist(self.center, x)
        return d <= self.radius if self.closed else d < self.radius

    __contains__ = contains

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"Ball({format_vector(self.center) or '0'}, {self.radius!r}, {kind})"


def ball_contains(b: Ball, x: Vector) -> bool:
    return b.contains(x)


def parse_vector(text: str, field: PadicField, domain: IndexDomain) -> FinVector:
    """Parse ``"i:num/den j:num/den ..."``; repeated indices accumulate."""
    entries: dict[int, PadicScalar] = {}
    col = 0
    for tok in text.split():
        col = text.index(tok, col) + 1
        if ":" not in tok:
            raise ParseError(f"expected index:value, got {tok!r}", column=col)
        idx, val = tok.split(":", 1)
        try:
            i = int(idx)
            a = field(val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad vector entry {tok!r}: {exc}", column=col) from None
        if not domain.contains(i):
            raise ParseError(f"index {i} is outside {domain.name}", column=col)
        entries[i] = entries[i] + a if i in entries else a
    return FinVector(field, domain, entries)


def format_vector(x: FinVector) -> str:
    parts = []
    for i, a in x.items():
        q = a.to_fraction()
        parts.append(f"{i}:{q.numerator}/{q.denominator}")
    return " ".join(parts)
