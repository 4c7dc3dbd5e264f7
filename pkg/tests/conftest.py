from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from padicdyn import NATURALS, FinVector, PadicField

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

primes = st.sampled_from([2, 3, 5, 7])


def nonzero_rationals(p=None, vmax=8):
    """Nonzero rationals times a random power of p (when given)."""
    base = st.builds(lambda a, b, s: Fraction(s * a, b), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6),
                     st.sampled_from([1, -1]))
    if p is None:
        return base
    return st.builds(lambda q, v: q * Fraction(p) ** v, base, st.integers(-vmax, vmax))


def vectors(F, domain, lo=1, hi=20, max_size=8):
    idx = st.integers(lo, hi) if domain is NATURALS else st.integers(-hi, hi)
    return st.dictionaries(idx, nonzero_rationals(F.p, 4), min_size=0, max_size=max_size).map(
        lambda d: FinVector(F, domain, {i: F(q) for i, q in d.items()}))


@pytest.fixture
def F5():
    return PadicField(5, 64)


def vp(q: Fraction, p: int) -> int:
    """Independent valuation oracle by repeated division."""
    def v(n):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return k
    return v(q.numerator) - v(q.denominator)
