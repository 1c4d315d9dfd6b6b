"""Exact rational scalars for the whole toolkit.

Every number in the system is an arbitrary-precision rational: always
reduced, denominator positive, zero stored as 0/1. ``gmpy2.mpq`` provides
that contract and is much faster on large operands; ``fractions.Fraction``
is the drop-in fallback. Set ``BIEBERBACH_NO_GMPY=1`` to force the fallback.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

try:
    if os.environ.get("BIEBERBACH_NO_GMPY"):
        raise ImportError("gmpy2 disabled by BIEBERBACH_NO_GMPY")
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpq as _mpq
    from gmpy2 import mpz as _mpz

    Rat = _mpq
    INT_TYPES = (int, type(_mpz(0)))
    RAT_TYPES = (_mpq, int, type(_mpz(0)))
    RAT_BACKEND = "gmpy2"

    def rat(num=0, den=1):
        """Build a reduced rational."""
        return _mpq(num, den)

    def igcd(a, b) -> int:
        return int(_gcd(_mpz(a), _mpz(b)))

except ImportError:
    Rat = Fraction
    INT_TYPES = (int,)
    RAT_TYPES = (Fraction, int)
    RAT_BACKEND = "fractions"

    def rat(num=0, den=1):
        """Build a reduced rational."""
        return Fraction(num, den)

    def igcd(a, b) -> int:
        return math.gcd(int(a), int(b))


ZERO = rat(0)
ONE = rat(1)
HALF = rat(1, 2)


def is_rat(x) -> bool:
    """True for the scalar types accepted wherever a rational is expected."""
    return isinstance(x, RAT_TYPES)


def num_den(x) -> tuple[int, int]:
    """(numerator, denominator) as plain ints, denominator > 0."""
    q = rat(x)
    return int(q.numerator), int(q.denominator)


def rat_sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def igcd_many(values) -> int:
    """gcd of an iterable of integers, 0 for an empty iterable."""
    g = 0
    for v in values:
        g = igcd(g, v)
        if g == 1:
            return 1
    return g


def ilcm_many(values) -> int:
    """lcm of an iterable of positive integers, 1 for an empty iterable."""
    l = 1
    for v in values:
        v = int(v)
        l = l // igcd(l, v) * v
    return l
