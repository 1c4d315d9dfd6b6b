"""Dense univariate polynomials over exact rationals.

The coefficient list is ascending in the variable (named ``c`` throughout
the kernel tables) with no trailing zero; the zero polynomial stores an
empty tuple. All arithmetic is exact: add, mul, divrem, gcd, content and
primitive part, derivative, evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import kernels
from .rationals import ONE, ZERO, igcd, igcd_many, ilcm_many, is_rat, rat, rat_sign


class Poly:
    """Univariate polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [rat(x) for x in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(x) -> "Poly":
        return Poly((x,))

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def var() -> "Poly":
        return Poly((0, 1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        """Leading coefficient (of the highest-degree term)."""
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if is_rat(other):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-x for x in self.coeffs))

    def __add__(self, other) -> "Poly":
        if is_rat(other):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-other if isinstance(other, Poly) else -rat(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if is_rat(other):
            if other == 0:
                return Poly.zero()
            return Poly(tuple(x * other for x in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly.zero()
        return Poly(kernels.conv(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divrem(self, d: "Poly") -> tuple["Poly", "Poly"]:
        """Quotient and remainder with deg r < deg d; exact rational arithmetic."""
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dd = d.degree
        lead = d.lc()
        q = [ZERO] * max(0, len(r) - dd)
        for i in range(len(r) - 1, dd - 1, -1):
            if r[i] == 0:
                continue
            f = r[i] / lead
            q[i - dd] = f
            for j, x in enumerate(d.coeffs):
                r[i - dd + j] = r[i - dd + j] - f * x
        return Poly(q), Poly(r[:dd] if dd > 0 else ())

    def __floordiv__(self, d: "Poly") -> "Poly":
        return self.divrem(d)[0]

    def __mod__(self, d: "Poly") -> "Poly":
        return self.divrem(d)[1]

    def exact_div(self, d: "Poly") -> "Poly":
        q, r = self.divrem(d)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def derivative(self) -> "Poly":
        return Poly(tuple(i * x for i, x in enumerate(self.coeffs) if i > 0))

    def eval(self, x):
        """Horner evaluation at an exact rational point."""
        acc = ZERO
        for coef in reversed(self.coeffs):
            acc = acc * x + coef
        return acc

    def content(self):
        """Rational g with self = g * primitive; carries the leading sign; 0 for zero."""
        if not self.coeffs:
            return ZERO
        g = igcd_many(abs(int(x.numerator)) for x in self.coeffs)
        l = ilcm_many(int(x.denominator) for x in self.coeffs)
        return rat(rat_sign(self.lc()) * g, l)

    def primitive(self) -> "Poly":
        """Integer coprime coefficients, positive leading coefficient; zero stays zero."""
        if not self.coeffs:
            return self
        return self * (ONE / self.content())

    def scale_reduce(self) -> "Poly":
        """Divide by the absolute content: integer coefficients, sign preserved."""
        if not self.coeffs:
            return self
        return self * abs(ONE / self.content())

    def squarefree_part(self) -> "Poly":
        """Primitive product of the distinct irreducible factors."""
        if self.degree <= 0:
            return Poly.one() if self.coeffs else self
        g = poly_gcd(self, self.derivative())
        return self.exact_div(g).primitive()

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"

    def to_str(self, var: str = "c") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            x = self.coeff(i)
            if x == 0:
                continue
            if i == 0:
                term = str(x)
            else:
                mag = "" if abs(x) == 1 else f"{abs(x)}*"
                term = f"{mag}{var}" + (f"^{i}" if i > 1 else "")
                if x < 0:
                    term = "-" + term
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient (1 for coprime inputs)."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        r = a.divrem(b)[1]
        a, b = b, r.primitive()
    return a


@dataclass(frozen=True)
class PolyTools:
    """Bundle of the shared helpers for one polynomial."""

    content: object
    primitive: Poly
    derivative: Poly
    eval: Callable


def poly_tools(p: Poly) -> PolyTools:
    """content * primitive = p (primitive has positive leading coefficient)."""
    return PolyTools(
        content=p.content(),
        primitive=p.primitive(),
        derivative=p.derivative(),
        eval=p.eval,
    )


C = Poly.var()
ONE_MINUS_C = Poly((1, -1))
