"""Truncated (Laurent) series in one variable with generic exact coefficients.

A series stores coefficients for exponents ``lo .. order-1``; ``order`` is
the exclusive truncation bound, or ``None`` for an exact polynomial known
to all orders. Binary operations carry the weakest validity implied by the
operands: addition takes the minimum order, multiplication of a series
valid mod z^N1 (support from lo1) with one valid mod z^N2 (support from
lo2) is valid mod z^min(N1+lo2, N2+lo1).
"""

from __future__ import annotations

from .laurent import Laurent
from .poly import Poly
from .rationals import HALF, is_rat, rat


class NonUnitConstantTerm(ValueError):
    """The z^0 coefficient is missing or not invertible."""


class OrderTooLow(ValueError):
    """The truncation order excludes the requested coefficient."""


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def invert_unit(x):
    """Multiplicative inverse of a unit coefficient; NonUnitConstantTerm otherwise."""
    if is_rat(x):
        if x == 0:
            raise NonUnitConstantTerm("constant term is zero")
        return rat(1) / rat(x)
    if isinstance(x, Poly):
        if x.degree != 0:
            raise NonUnitConstantTerm("constant term is not an invertible polynomial")
        return Poly.const(invert_unit(x.coeffs[0]))
    if isinstance(x, Laurent):
        if x.lo == 0 and len(x.coeffs) == 1:
            return Laurent.const(invert_unit(x.coeffs[0]))
        raise NonUnitConstantTerm("constant term is not an invertible Laurent unit")
    inv = getattr(x, "inverse_as_unit", None)
    if inv is not None:
        return inv()
    raise NonUnitConstantTerm(f"cannot invert constant term {x!r}")


class Series:
    __slots__ = ("lo", "coeffs", "order")

    def __init__(self, lo: int = 0, coeffs=(), order=None):
        cs = list(coeffs)
        if order is not None and lo + len(cs) > order:
            cs = cs[: max(0, order - lo)]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        if start == end:
            self.lo = 0
            self.coeffs = ()
        else:
            self.lo = lo + start
            self.coeffs = tuple(cs[start:end])
        self.order = order

    @staticmethod
    def const(x, order=None) -> "Series":
        return Series(0, (x,), order)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int):
        """Stored coefficient of z^e (0 outside the support, no validity check)."""
        if self.coeffs and self.lo <= e <= self.hi:
            return self.coeffs[e - self.lo]
        return 0

    def ct(self):
        """The z^0 coefficient; OrderTooLow if the truncation excludes it."""
        if self.order is not None and self.order <= 0:
            raise OrderTooLow("truncation order excludes the constant term")
        return self.coeff(0)

    def truncate(self, n: int) -> "Series":
        return Series(self.lo, self.coeffs, _min_order(self.order, n))

    def as_exact(self) -> "Series":
        """Reinterpret the stored coefficients as an exact polynomial."""
        return Series(self.lo, self.coeffs, None)

    def dense(self, lo: int, hi: int) -> list:
        """Coefficients for exponents lo..hi-1 as a dense list."""
        return [self.coeff(e) for e in range(lo, hi)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.order == other.order
            and self.coeffs == other.coeffs
            and (self.is_zero() or self.lo == other.lo)
        )

    def __hash__(self):
        return hash(("Series", self.lo, self.coeffs, self.order))

    def __neg__(self) -> "Series":
        return Series(self.lo, tuple(-x for x in self.coeffs), self.order)

    def __add__(self, other) -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        order = _min_order(self.order, other.order)
        if self.is_zero():
            return Series(other.lo, other.coeffs, order)
        if other.is_zero():
            return Series(self.lo, self.coeffs, order)
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0] * (hi - lo + 1)
        for i, x in enumerate(self.coeffs):
            out[self.lo - lo + i] = x
        for i, x in enumerate(other.coeffs):
            out[other.lo - lo + i] = out[other.lo - lo + i] + x
        return Series(lo, out, order)

    def __sub__(self, other) -> "Series":
        return self + (-other)

    def __mul__(self, other) -> "Series":
        from . import kernels

        if not isinstance(other, Series):
            return NotImplemented
        lo1 = self.lo if self.coeffs else 0
        lo2 = other.lo if other.coeffs else 0
        order = None
        if self.order is not None:
            order = self.order + lo2
        if other.order is not None:
            order = _min_order(order, other.order + lo1)
        if self.is_zero() or other.is_zero():
            return Series(0, (), order)
        return Series(
            lo1 + lo2,
            kernels.conv(list(self.coeffs), list(other.coeffs)),
            order,
        )

    def scale(self, s) -> "Series":
        if s == 0:
            return Series(0, (), self.order)
        return Series(self.lo, tuple(x * s for x in self.coeffs), self.order)

    def shift(self, m: int) -> "Series":
        """Multiply by z^m."""
        return Series(
            self.lo + m, self.coeffs, None if self.order is None else self.order + m
        )

    def __repr__(self) -> str:
        body = ", ".join(
            f"z^{self.lo + i}: {x!r}" for i, x in enumerate(self.coeffs)
        )
        return f"Series({body or '0'}; order={self.order})"


def ct_z(f: Series):
    """Constant term of a truncated Laurent series (exact)."""
    return f.ct()


def series_inverse(f: Series, n: int) -> Series:
    """g with f*g = 1 mod z^n; needs an invertible z^0 coefficient."""
    if f.order is not None:
        n = min(n, f.order)
    if f.is_zero() or f.lo > 0:
        raise NonUnitConstantTerm("constant term is zero")
    if f.lo < 0:
        raise ValueError("series has negative valuation")
    g0 = invert_unit(f.coeff(0))
    if n <= 0:
        return Series(0, (), max(n, 0))
    fc = f.dense(0, n)
    gs = [g0]
    from . import kernels

    for m in range(1, n):
        s = kernels.dot(fc[1 : m + 1], gs[m - 1 :: -1])
        gs.append(-(g0 * s) if not s == 0 else 0)
    return Series(0, gs, n)


def series_inv_sqrt(f: Series, n: int) -> Series:
    """g with g*g*f = 1 mod z^n, for f with constant term exactly 1.

    Newton iteration g <- g + g*(1 - f*g^2)/2, doubling the valid order
    each step; exact at every step.
    """
    if f.order is not None:
        n = min(n, f.order)
    if f.is_zero() or f.lo > 0:
        raise NonUnitConstantTerm("constant term is zero")
    if f.lo < 0:
        raise ValueError("series has negative valuation")
    one = f.coeff(0)
    if not one == 1:
        raise NonUnitConstantTerm("inverse square root needs constant term 1")
    if n <= 0:
        return Series(0, (), max(n, 0))
    g = Series.const(one)
    m = 1
    while m < n:
        m2 = min(2 * m, n)
        ft = f.truncate(m2)
        residual = Series.const(one, m2) - ft * g * g
        g = (g + (g * residual.truncate(m2)).scale(HALF)).truncate(m2).as_exact()
        m = m2
    return g.truncate(n)
