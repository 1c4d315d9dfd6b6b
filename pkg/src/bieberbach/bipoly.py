"""Bivariate polynomials in (n, c) over exact rationals, and the rational
functions built from them.

These are the coefficient domain of recurrence operators: sparse term maps,
with gcd/exact-division implemented recursively through the dense univariate
layer (polynomials in n whose coefficients are polynomials in c).
"""

from __future__ import annotations

from math import comb

from .poly import Poly, poly_gcd
from .rationals import ONE, ZERO, igcd_many, ilcm_many, is_rat, rat, rat_sign


class BiPoly:
    """Sparse bivariate polynomial: {(deg_n, deg_c): coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, val in terms.items():
                v = rat(val)
                if v != 0:
                    clean[key] = v
        self.terms = clean

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly()

    @staticmethod
    def const(x) -> "BiPoly":
        return BiPoly({(0, 0): x})

    @staticmethod
    def one() -> "BiPoly":
        return BiPoly.const(1)

    @staticmethod
    def var_n() -> "BiPoly":
        return BiPoly({(1, 0): 1})

    @staticmethod
    def var_c() -> "BiPoly":
        return BiPoly({(0, 1): 1})

    @staticmethod
    def from_poly_c(p: Poly) -> "BiPoly":
        return BiPoly({(0, i): x for i, x in enumerate(p.coeffs)})

    @staticmethod
    def from_poly_n(p: Poly) -> "BiPoly":
        return BiPoly({(i, 0): x for i, x in enumerate(p.coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_n(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    @property
    def deg_c(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if is_rat(other):
            if other == 0:
                return not self.terms
            return self.terms == {(0, 0): rat(other)}
        return NotImplemented

    def __hash__(self):
        return hash(("BiPoly", tuple(sorted(self.terms.items()))))

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __add__(self, other) -> "BiPoly":
        if is_rat(other):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return BiPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "BiPoly":
        if is_rat(other):
            other = BiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + other

    def __mul__(self, other) -> "BiPoly":
        if is_rat(other):
            if other == 0:
                return BiPoly.zero()
            return BiPoly({k: v * other for k, v in self.terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        out = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, ZERO) + v1 * v2
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BiPoly":
        out = BiPoly.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def eval_n(self, n0) -> Poly:
        """Substitute an exact value for n; returns a polynomial in c."""
        n0 = rat(n0)
        if not self.terms:
            return Poly.zero()
        out = [ZERO] * (self.deg_c + 1)
        for (a, b), v in self.terms.items():
            out[b] = out[b] + v * n0**a
        return Poly(out)

    def eval(self, n0, c0):
        return self.eval_n(n0).eval(rat(c0))

    def shift_n(self, delta: int = 1) -> "BiPoly":
        """Substitute n -> n + delta."""
        if delta == 0 or not self.terms:
            return self
        out = {}
        for (a, b), v in self.terms.items():
            for j in range(a + 1):
                key = (j, b)
                out[key] = out.get(key, ZERO) + v * comb(a, j) * delta ** (a - j)
        return BiPoly(out)

    def leading_key(self) -> tuple[int, int]:
        """Graded-lex leading monomial with n ranked above c."""
        return max(self.terms, key=lambda k: (k[0] + k[1], k[0]))

    def content(self):
        """Signed rational content (sign of the graded-lex leading coefficient)."""
        if not self.terms:
            return ZERO
        g = igcd_many(abs(int(v.numerator)) for v in self.terms.values())
        l = ilcm_many(int(v.denominator) for v in self.terms.values())
        return rat(rat_sign(self.terms[self.leading_key()]) * g, l)

    def primitive(self) -> "BiPoly":
        if not self.terms:
            return self
        return self * (ONE / self.content())

    def as_n_coeffs(self) -> list[Poly]:
        """Coefficients of powers of n, each a polynomial in c."""
        if not self.terms:
            return []
        rows = [dict() for _ in range(self.deg_n + 1)]
        for (a, b), v in self.terms.items():
            rows[a][b] = v
        out = []
        for row in rows:
            size = max(row, default=-1) + 1
            cs = [ZERO] * size
            for b, v in row.items():
                cs[b] = v
            out.append(Poly(cs))
        return out

    @staticmethod
    def from_n_coeffs(coeffs: list[Poly]) -> "BiPoly":
        terms = {}
        for a, p in enumerate(coeffs):
            for b, v in enumerate(p.coeffs):
                if v != 0:
                    terms[(a, b)] = v
        return BiPoly(terms)

    def to_str(self, vn: str = "n", vc: str = "c") -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms, key=lambda k: (-(k[0] + k[1]), -k[0])):
            v = self.terms[(a, b)]
            mono = "*".join(
                ([f"{vn}^{a}" if a > 1 else vn] if a else [])
                + ([f"{vc}^{b}" if b > 1 else vc] if b else [])
            )
            if mono and abs(v) == 1:
                term = mono if v > 0 else f"-{mono}"
            else:
                term = f"{v}*{mono}" if mono else str(v)
            parts.append(term)
        joined = parts[0]
        for t in parts[1:]:
            joined += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return joined

    def __repr__(self) -> str:
        return f"BiPoly({self.to_str()})"


def _upoly_trim(u: list[Poly]) -> list[Poly]:
    while u and u[-1].is_zero():
        u.pop()
    return u


def _upoly_content(u: list[Poly]) -> Poly:
    g = Poly.zero()
    for p in u:
        if not p.is_zero():
            g = poly_gcd(g, p) if not g.is_zero() else p.primitive()
            if g.degree == 0:
                return Poly.one()
    return g if not g.is_zero() else Poly.one()


def _upoly_divexact_poly(u: list[Poly], d: Poly) -> list[Poly]:
    return [p.exact_div(d) for p in u]


def _upoly_pseudo_rem(a: list[Poly], b: list[Poly]) -> list[Poly]:
    """Pseudo-remainder of a by b in (Q[c])[n] (fraction-free)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [p * lb for p in r]
        for j in range(db + 1):
            r[shift + j] = r[shift + j] - lr * b[j]
        r = _upoly_trim(r)
    return r


def bipoly_gcd(x: BiPoly, y: BiPoly) -> BiPoly:
    """Primitive gcd (integer coprime coefficients, positive graded-lex lead)."""
    if x.is_zero():
        return y.primitive()
    if y.is_zero():
        return x.primitive()
    a, b = x.as_n_coeffs(), y.as_n_coeffs()
    ca, cb = _upoly_content(a), _upoly_content(b)
    cont = poly_gcd(ca, cb)
    a = _upoly_divexact_poly(a, ca)
    b = _upoly_divexact_poly(b, cb)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _upoly_pseudo_rem(a, b)
        if not r:
            a = b
            b = []
            break
        a, b = b, _upoly_divexact_poly(r, _upoly_content(r))
    if len(b) == 1:  # nonzero constant in n: gcd of primitive parts is 1
        g = [Poly.one()]
    else:
        g = a
    out = BiPoly.from_n_coeffs([p * cont for p in g])
    return out.primitive()


def bipoly_divexact(x: BiPoly, d: BiPoly) -> BiPoly:
    """Exact division; raises ValueError when d does not divide x."""
    if d.is_zero():
        raise ZeroDivisionError("bivariate division by zero")
    if x.is_zero():
        return BiPoly.zero()
    a, b = x.as_n_coeffs(), d.as_n_coeffs()
    db = len(b) - 1
    lb = b[-1]
    q = [Poly.zero()] * (len(a) - db)
    r = list(a)
    r_len = len(r)
    while (r := _upoly_trim(r)) and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        qc = r[-1].divrem(lb)
        if not qc[1].is_zero():
            raise ValueError("bivariate division is not exact")
        q[shift] = qc[0]
        for j in range(db + 1):
            r[shift + j] = r[shift + j] - qc[0] * b[j]
    if r:
        raise ValueError("bivariate division is not exact")
    return BiPoly.from_n_coeffs(q)


def bipoly_lcm(x: BiPoly, y: BiPoly) -> BiPoly:
    if x.is_zero() or y.is_zero():
        return BiPoly.zero()
    return bipoly_divexact(x * y, bipoly_gcd(x, y)).primitive()


class RatFunc:
    """Reduced rational function num/den in (n, c); den is primitive with a
    positive graded-lex leading coefficient, num carries the rational scale."""

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly | None = None, _reduced=False):
        if den is None:
            den = BiPoly.one()
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = BiPoly.zero()
            self.den = BiPoly.one()
            return
        if _reduced:
            self.num = num
            self.den = den
            return
        cn, cd = num.content(), den.content()
        pn = num * (ONE / cn)
        pd = den * (ONE / cd)
        g = bipoly_gcd(pn, pd)
        if g.deg_n > 0 or g.deg_c > 0:
            pn = bipoly_divexact(pn, g)
            pd = bipoly_divexact(pd, g)
        self.num = pn * (cn / cd)
        self.den = pd

    @staticmethod
    def const(x) -> "RatFunc":
        return RatFunc(BiPoly.const(x))

    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(BiPoly.zero())

    @staticmethod
    def from_poly_pair(num: BiPoly, den: BiPoly) -> "RatFunc":
        return RatFunc(num, den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if is_rat(other):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash(("RatFunc", self.num, self.den))

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __add__(self, other) -> "RatFunc":
        if is_rat(other):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        if is_rat(other):
            other = RatFunc.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        if is_rat(other):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        if is_rat(other):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def shift_n(self, delta: int = 1) -> "RatFunc":
        return RatFunc(self.num.shift_n(delta), self.den.shift_n(delta), _reduced=True)

    def eval_n(self, n0) -> tuple[Poly, Poly]:
        """Specialize n; returns (numerator, denominator) polynomials in c."""
        return self.num.eval_n(n0), self.den.eval_n(n0)

    def eval(self, n0, c0):
        num, den = self.num.eval(n0, c0), self.den.eval(n0, c0)
        if den == 0:
            raise ZeroDivisionError(f"pole at (n, c) = ({n0}, {c0})")
        return num / den

    def __repr__(self) -> str:
        if self.den == BiPoly.one():
            return f"RatFunc({self.num.to_str()})"
        return f"RatFunc(({self.num.to_str()}) / ({self.den.to_str()}))"
