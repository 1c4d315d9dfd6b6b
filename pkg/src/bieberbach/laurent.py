"""Laurent polynomials in one symmetric variable (``w`` in the kernel tables).

Coefficients are generic exact objects (rationals or Poly); storage is a
dense list from the lowest to the highest exponent, trimmed so the first
and last stored coefficients are nonzero. Exponent reflection w -> 1/w is
an exact involution.
"""

from __future__ import annotations

from . import kernels
from .rationals import is_rat


class Laurent:
    __slots__ = ("lo", "coeffs")

    def __init__(self, lo: int = 0, coeffs=()):
        cs = list(coeffs)
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

    @staticmethod
    def zero() -> "Laurent":
        return Laurent(0, ())

    @staticmethod
    def const(x) -> "Laurent":
        return Laurent(0, (x,))

    @property
    def hi(self) -> int:
        """Highest stored exponent (lo - 1 for zero, keeping hi < lo)."""
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int):
        """Coefficient of w^k; 0 outside the stored support."""
        if self.lo <= k <= self.hi:
            return self.coeffs[k - self.lo]
        return 0

    def reflect(self) -> "Laurent":
        """Substitute w -> 1/w."""
        return Laurent(-self.hi, tuple(reversed(self.coeffs)))

    def __eq__(self, other) -> bool:
        if isinstance(other, Laurent):
            if self.is_zero() and other.is_zero():
                return True
            return self.lo == other.lo and self.coeffs == other.coeffs
        if other == 0:
            return self.is_zero()
        return self == Laurent.const(other)

    def __hash__(self):
        return hash(("Laurent", self.lo, self.coeffs))

    def __neg__(self) -> "Laurent":
        return Laurent(self.lo, tuple(-x for x in self.coeffs))

    def __add__(self, other) -> "Laurent":
        if other == 0:
            return self
        if not isinstance(other, Laurent):
            other = Laurent.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0] * (hi - lo + 1)
        for i, x in enumerate(self.coeffs):
            out[self.lo - lo + i] = x
        for i, x in enumerate(other.coeffs):
            out[other.lo - lo + i] = out[other.lo - lo + i] + x
        return Laurent(lo, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Laurent":
        return self + (-other if isinstance(other, Laurent) else -other)

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            if self.is_zero() or other.is_zero():
                return Laurent.zero()
            return Laurent(
                self.lo + other.lo,
                kernels.conv(list(self.coeffs), list(other.coeffs)),
            )
        # scalar (rational or Poly) scaling
        if other == 0:
            return Laurent.zero()
        return Laurent(self.lo, tuple(x * other for x in self.coeffs))

    def __rmul__(self, other) -> "Laurent":
        return self.__mul__(other)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Laurent(0)"
        terms = ", ".join(f"w^{self.lo + i}: {x!r}" for i, x in enumerate(self.coeffs))
        return f"Laurent({terms})"


def coeff_w(f: Laurent, k: int):
    """The w^k coefficient of ``f``; 0 outside the stored support."""
    return f.coeff(k)
