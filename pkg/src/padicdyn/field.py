"""p-adic scalars at capped relative precision, and exact norm values.

A :class:`PadicScalar` is ``u * p**v`` with ``u`` a p-adic unit known to a
fixed number of significant digits.  Scalars built from rationals also keep
their exact rational value; arithmetic between exact scalars stays exact, so
``x - x`` is the exact zero.  As soon as a capped (inexact) scalar takes part
in an operation the result is capped too, and a cancellation that eats every
known digit raises :class:`~padicdyn.errors.PrecisionExhausted` instead of
guessing zero.

Norms never touch floating point: ``|x| = p**(-v(x))`` is held as the integer
exponent in a :class:`NormExp`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

import gmpy2
from gmpy2 import mpq, mpz
from sympy import isprime

from .errors import DivisionByZero, FieldMismatch, PrecisionExhausted

INF = math.inf
DEFAULT_PRECISION = 64


@total_ordering
class NormExp:
    """An exact value of the norm: ``Zero`` or ``Pow(e)`` meaning ``p**e``.

    ``exponent`` is ``None`` for Zero.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent: int | None):
        self.exponent = None if exponent is None else int(exponent)

    @classmethod
    def zero(cls) -> "NormExp":
        return ZERO

    @classmethod
    def pow(cls, e: int) -> "NormExp":
        return cls(e)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __eq__(self, other):
        if not isinstance(other, NormExp):
            return NotImplemented
        return self.exponent == other.exponent

    def __lt__(self, other):
        if not isinstance(other, NormExp):
            return NotImplemented
        if other.exponent is None:
            return False
        if self.exponent is None:
            return True
        return self.exponent < other.exponent

    def __hash__(self):
        return hash(("NormExp", self.exponent))

    def __mul__(self, other):
        if not isinstance(other, NormExp):
            return NotImplemented
        if self.exponent is None or other.exponent is None:
            return ZERO
        return NormExp(self.exponent + other.exponent)

    def __truediv__(self, other):
        if not isinstance(other, NormExp):
            return NotImplemented
        if other.exponent is None:
            raise DivisionByZero("division by the zero norm")
        if self.exponent is None:
            return ZERO
        return NormExp(self.exponent - other.exponent)

    def __pow__(self, n: int):
        if self.exponent is None:
            return ONE_NORM if n == 0 else ZERO
        return NormExp(self.exponent * n)

    def to_fraction(self, p: int) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return Fraction(p) ** self.exponent

    def __repr__(self):
        return "Zero" if self.exponent is None else f"Pow({self.exponent})"


ZERO = NormExp(None)
ONE_NORM = NormExp(0)


def norm_max(norms) -> NormExp:
    """Maximum of an iterable of norms; Zero for an empty iterable."""
    best = ZERO
    for n in norms:
        if best < n:
            best = n
    return best


def _vp(n: mpz, p: int) -> tuple[mpz, int]:
    """Split ``n != 0`` into ``(n / p**k, k)``."""
    return gmpy2.remove(n, p)


class PadicField:
    """The field Q_p, with ``precision`` significant base-p digits per scalar."""

    __slots__ = ("p", "precision", "_modulus")

    def __init__(self, p: int, precision: int = DEFAULT_PRECISION):
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise ValueError(f"{p} is not prime")
        if not isinstance(precision, int) or precision < 1:
            raise ValueError("precision must be a positive integer")
        self.p = p
        self.precision = precision
        self._modulus = mpz(p) ** precision

    def __eq__(self, other):
        return isinstance(other, PadicField) and (self.p, self.precision) == (other.p, other.precision)

    def __hash__(self):
        return hash(("PadicField", self.p, self.precision))

    def __repr__(self):
        return f"PadicField(p={self.p}, precision={self.precision})"

    def __call__(self, value, den=None) -> "PadicScalar":
        if isinstance(value, PadicScalar):
            self._check(value)
            return value
        if den is not None:
            return self.from_rational(value, den)
        if isinstance(value, str):
            return self.from_rational(*_split_rational(value))
        if isinstance(value, Fraction):
            return self.from_rational(value.numerator, value.denominator)
        if isinstance(value, int):
            return self.from_rational(value, 1)
        if isinstance(value, type(mpq())):
            return PadicScalar._from_mpq(self, value)
        raise TypeError(f"cannot embed {type(value).__name__} into Q_{self.p}")

    def _check(self, a: "PadicScalar"):
        if a.field != self:
            raise FieldMismatch(f"{a.field} != {self}")

    def from_rational(self, num: int, den: int = 1) -> "PadicScalar":
        if den == 0:
            raise DivisionByZero("zero denominator")
        return PadicScalar._from_mpq(self, mpq(num, den))

    def from_unit(self, valuation: int, unit: int, precision: int | None = None) -> "PadicScalar":
        """A capped scalar ``unit * p**valuation`` known to ``precision`` digits."""
        prec = self.precision if precision is None else min(precision, self.precision)
        if prec < 1:
            raise ValueError("precision must be positive")
        u = mpz(unit) % (mpz(self.p) ** prec)
        if u % self.p == 0:
            raise ValueError("unit part must not be divisible by p")
        return PadicScalar._capped(self, int(valuation), u, prec)

    def uniformizer_power(self, e: int) -> "PadicScalar":
        return PadicScalar._from_mpq(self, mpq(self.p) ** e if e >= 0 else mpq(1, self.p ** (-e)), e)

    @property
    def zero(self) -> "PadicScalar":
        return PadicScalar._from_mpq(self, mpq(0))

    @property
    def one(self) -> "PadicScalar":
        return PadicScalar._from_mpq(self, mpq(1), 0)


def _split_rational(text: str) -> tuple[int, int]:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return int(num), int(den)
    return int(text), 1


class PadicScalar:
    """An element of Q_p.

    Exact scalars carry their rational value; capped scalars carry only
    ``valuation`` and ``unit mod p**precision``.  Instances are immutable.
    """

    __slots__ = ("field", "valuation", "_exact", "_unit", "_prec")

    def __init__(self):
        raise TypeError("use PadicField.from_rational / from_unit")

    @classmethod
    def _from_mpq(cls, field: PadicField, q, valuation=None) -> "PadicScalar":
        self = object.__new__(cls)
        self.field = field
        self._exact = q
        self._unit = None
        self._prec = field.precision
        if q == 0:
            self.valuation = INF
        elif valuation is None:
            _, vn = _vp(q.numerator, field.p)
            _, vd = _vp(q.denominator, field.p)
            self.valuation = vn - vd
        else:
            self.valuation = valuation
        return self

    @classmethod
    def _capped(cls, field, valuation, unit, prec) -> "PadicScalar":
        self = object.__new__(cls)
        self.field = field
        self.valuation = valuation
        self._exact = None
        self._unit = unit
        self._prec = prec
        return self

    # -- basic queries -------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._exact is not None

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def precision(self) -> int:
        """Number of significant digits carried (the field cap for exact scalars)."""
        return self._prec

    @property
    def absolute_precision(self):
        if self._exact is not None:
            return INF
        return self.valuation + self._prec

    @property
    def unit(self) -> int:
        """Unit part ``u`` with ``x = u * p**v``, reduced mod ``p**precision``."""
        if self.is_zero:
            raise ValueError("zero has no unit part")
        if self._unit is None:
            self._unit = self._unit_digits(self._prec)
        return int(self._unit)

    def _unit_digits(self, k: int) -> mpz:
        """Unit part modulo ``p**k``; any ``k`` for exact scalars, ``k <= precision`` otherwise."""
        p = self.field.p
        mod = mpz(p) ** k
        if self._exact is None:
            return self._unit % mod
        num, _ = _vp(self._exact.numerator, p)
        den, _ = _vp(self._exact.denominator, p)
        return (num * gmpy2.invert(den, mod)) % mod

    def norm(self) -> NormExp:
        return ZERO if self.is_zero else NormExp(-self.valuation)

    def to_fraction(self) -> Fraction:
        if self._exact is None:
            raise ValueError("capped scalar has no exact rational value")
        return Fraction(int(self._exact.numerator), int(self._exact.denominator))

    def capped(self, precision: int | None = None) -> "PadicScalar":
        """Forget the exact value, keeping ``precision`` significant digits."""
        if self.is_zero:
            return self
        prec = self._prec if precision is None else min(precision, self._prec)
        return PadicScalar._capped(self.field, self.valuation, self._unit_digits(prec), prec)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} != {self.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        f = self.field
        if self._exact is not None and other._exact is not None:
            if self.valuation != other.valuation:
                return PadicScalar._from_mpq(f, self._exact + other._exact, min(self.valuation, other.valuation))
            return PadicScalar._from_mpq(f, self._exact + other._exact)
        vmin = min(self.valuation, other.valuation)
        cap = min(self.absolute_precision, other.absolute_precision)
        width = cap - vmin
        if width <= 0:
            raise PrecisionExhausted("no overlapping significant digits")
        p = mpz(f.p)
        mod = p ** width

        def digits(x):
            shift = x.valuation - vmin
            if shift >= width:
                return mpz(0)
            return (x._unit_digits(width - shift) * p ** shift) % mod

        s = (digits(self) + digits(other)) % mod
        if s == 0:
            raise PrecisionExhausted(f"cancellation of all {width} known digits")
        u, t = _vp(s, f.p)
        v = vmin + t
        prec = min(cap - v, f.precision)
        return PadicScalar._capped(f, v, u % p ** prec, prec)

    __radd__ = __add__

    def __neg__(self):
        if self._exact is not None:
            return PadicScalar._from_mpq(self.field, -self._exact, self.valuation)
        mod = mpz(self.field.p) ** self._prec
        return PadicScalar._capped(self.field, self.valuation, (-self._unit) % mod, self._prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if self.is_zero or other.is_zero:
            return f.zero
        v = self.valuation + other.valuation
        if self._exact is not None and other._exact is not None:
            return PadicScalar._from_mpq(f, self._exact * other._exact, v)
        prec = min(self._prec, other._prec)
        mod = mpz(f.p) ** prec
        return PadicScalar._capped(f, v, (self._unit_digits(prec) * other._unit_digits(prec)) % mod, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        if self._exact is not None:
            return PadicScalar._from_mpq(self.field, 1 / self._exact, -self.valuation)
        mod = mpz(self.field.p) ** self._prec
        return PadicScalar._capped(self.field, -self.valuation, gmpy2.invert(self._unit, mod), self._prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.field.one
        if self.is_zero:
            return self
        v = self.valuation * n
        if self._exact is not None:
            return PadicScalar._from_mpq(self.field, self._exact ** n, v)
        mod = mpz(self.field.p) ** self._prec
        return PadicScalar._capped(self.field, v, pow(self._unit, n, mod), self._prec)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if self._exact is None:
                return False
            return self._exact == other
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if self.field != other.field:
            return False
        if self._exact is not None or other._exact is not None:
            return self._exact is not None and other._exact is not None and self._exact == other._exact
        return (self.valuation, self._prec, self._unit) == (other.valuation, other._prec, other._unit)

    def __hash__(self):
        if self._exact is not None:
            return hash(self._exact)
        return hash((self.valuation, self._prec, int(self._unit)))

    def agrees_with(self, other: "PadicScalar", digits: int | None = None) -> bool:
        """True when both have the same valuation and their units agree to ``digits`` places."""
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self.valuation != other.valuation:
            return False
        k = min(self._prec, other._prec) if digits is None else digits
        return self._unit_digits(k) == other._unit_digits(k)

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        if self._exact is not None:
            return f"PadicScalar(p={self.field.p}, {self._exact.numerator}/{self._exact.denominator})"
        return f"PadicScalar(p={self.field.p}, v={self.valuation}, u={int(self._unit)}, prec={self._prec})"

    def __str__(self):
        if self._exact is not None:
            q = self._exact
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return f"{int(self._unit)}*{self.field.p}^{self.valuation} + O({self.field.p}^{self.absolute_precision})"


def add(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    return a + b


def mul(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    return a * b


def neg(a: PadicScalar) -> PadicScalar:
    return -a


def inv(a: PadicScalar) -> PadicScalar:
    return a.inverse()


def power(a: PadicScalar, n: int) -> PadicScalar:
    return a ** n


def from_rational(field: PadicField, num: int, den: int = 1) -> PadicScalar:
    return field.from_rational(num, den)


def norm(a: PadicScalar) -> NormExp:
    return a.norm()


def binomial(n: int, j: int, field: PadicField) -> PadicScalar:
    """``C(n, j)`` embedded in Q_p.  Its norm never exceeds 1."""
    if n < 0 or j < 0 or j > n:
        raise ValueError(f"binomial({n}, {j}) out of range")
    return field.from_rational(math.comb(n, j), 1)
