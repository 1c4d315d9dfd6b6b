"""Formal verification of the Loewner-derivative identity.

Works over a free commutative algebra on generators c_k, cb_k (conjugates)
and their formal time-derivatives cd_k, cbd_k. The time derivation acts at
fixed z; the outer variable w is transported along the Koebe flow
wdot = -w(1-w)/(1+w) obtained by differentiating z/(1-z)^2 = e^t w/(1-w)^2
at fixed z, which collapses the left side to an exact closed form. The
identity is asserted up to one global sign epsilon, constant across all
orders in w.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Poly
from .rationals import HALF, ZERO, is_rat, rat
from .series import NonUnitConstantTerm, Series, series_inverse

# generator families
FAM_C, FAM_CB, FAM_CD, FAM_CBD = 0, 1, 2, 3
_FAM_NAMES = ("c", "cb", "cd", "cbd")


class SymPoly:
    """Sparse polynomial over the generators c_k, cb_k, cd_k, cbd_k (k >= 1).

    A monomial is a sorted tuple of ((family, index), exponent) pairs;
    coefficients are exact rationals.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, val in terms.items():
                v = rat(val)
                if v != 0:
                    clean[mono] = v
        self.terms = clean

    @staticmethod
    def const(x) -> "SymPoly":
        return SymPoly({(): x})

    @staticmethod
    def zero() -> "SymPoly":
        return SymPoly()

    @staticmethod
    def gen(fam: int, k: int) -> "SymPoly":
        if k < 1:
            raise ValueError("generator index must be >= 1")
        return SymPoly({(((fam, k), 1),): 1})

    @staticmethod
    def c(k: int) -> "SymPoly":
        return SymPoly.gen(FAM_C, k)

    @staticmethod
    def cb(k: int) -> "SymPoly":
        return SymPoly.gen(FAM_CB, k)

    @staticmethod
    def cd(k: int) -> "SymPoly":
        return SymPoly.gen(FAM_CD, k)

    @staticmethod
    def cbd(k: int) -> "SymPoly":
        return SymPoly.gen(FAM_CBD, k)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_part(self):
        return self.terms.get((), ZERO)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SymPoly):
            return self.terms == other.terms
        if is_rat(other):
            if other == 0:
                return not self.terms
            return self.terms == {(): rat(other)}
        return NotImplemented

    def __hash__(self):
        return hash(("SymPoly", tuple(sorted(self.terms.items()))))

    def __neg__(self) -> "SymPoly":
        return SymPoly({m: -v for m, v in self.terms.items()})

    def __add__(self, other) -> "SymPoly":
        if is_rat(other):
            other = SymPoly.const(other)
        if not isinstance(other, SymPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, ZERO) + v
        return SymPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "SymPoly":
        if is_rat(other):
            other = SymPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "SymPoly":
        return (-self) + other

    def __mul__(self, other) -> "SymPoly":
        if is_rat(other):
            if other == 0:
                return SymPoly.zero()
            return SymPoly({m: v * other for m, v in self.terms.items()})
        if not isinstance(other, SymPoly):
            return NotImplemented
        out = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, ZERO) + v1 * v2
        return SymPoly(out)

    __rmul__ = __mul__

    def conj(self) -> "SymPoly":
        """Swap c_k <-> cb_k and cd_k <-> cbd_k; an involution fixing rationals."""
        out = {}
        for mono, v in self.terms.items():
            m = tuple(sorted((((fam ^ 1, k), e) for (fam, k), e in mono)))
            out[m] = v
        return SymPoly(out)

    def derivation(self) -> "SymPoly":
        """Formal d/dt: D(c_k) = cd_k, D(cb_k) = cbd_k, Leibniz on products.

        Only defined on dot-free elements (no cd/cbd generators present)."""
        out = SymPoly.zero()
        for mono, v in self.terms.items():
            for (fam, k), e in mono:
                if fam >= FAM_CD:
                    raise ValueError("derivation applied to a dotted element")
            for pos, ((fam, k), e) in enumerate(mono):
                rest = list(mono)
                if e == 1:
                    rest.pop(pos)
                else:
                    rest[pos] = ((fam, k), e - 1)
                dotted = _mono_mul(tuple(rest), (((fam + 2, k), 1),))
                out = out + SymPoly({dotted: v * e})
        return out

    def inverse_as_unit(self) -> "SymPoly":
        if list(self.terms) == [()]:
            return SymPoly.const(rat(1) / self.terms[()])
        raise NonUnitConstantTerm("symbol polynomial is not an invertible constant")

    # grading helpers used by the support-bound checks
    def max_index(self) -> int:
        return max((k for m in self.terms for (_, k), _ in m), default=0)

    def index_weight(self) -> int:
        return max(
            (sum(k * e for (_, k), e in m) for m in self.terms), default=0
        )

    def dotted_degree(self) -> int:
        return max(
            (
                sum(e for (fam, _), e in m if fam >= FAM_CD)
                for m in self.terms
            ),
            default=0,
        )

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "SymPoly(0)"
        parts = []
        for mono in sorted(self.terms):
            v = self.terms[mono]
            gens = "*".join(
                f"{_FAM_NAMES[fam]}{k}" + (f"^{e}" if e > 1 else "")
                for (fam, k), e in mono
            )
            parts.append(f"{v}" + (f"*{gens}" if gens else ""))
        return "SymPoly(" + " + ".join(parts) + ")"


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for g, e in m2:
        out[g] = out.get(g, 0) + e
    return tuple(sorted(out.items()))


_SYM_ONE = SymPoly.const(1)
_SYM_TWO = SymPoly.const(2)


def flow_ratio(max_order: int) -> Series:
    """(d f_t/dt) / (z df_t/dz) mod z^(max_order+1), after the common factor
    f_t and the e^t factor cancel: (1 + sum cd_k z^k) / (1 + sum k c_k z^k)."""
    if max_order < 0:
        raise ValueError("negative order")
    num = Series(
        0, [_SYM_ONE] + [SymPoly.cd(k) for k in range(1, max_order + 1)]
    )
    den = Series(
        0,
        [_SYM_ONE] + [SymPoly.c(k) * rat(k) for k in range(1, max_order + 1)],
    )
    return num * series_inverse(den, max_order + 1)


def weinstein_bracket(k: int, conjugated: bool) -> Series:
    """2(1 + sum_{r<=k} r c_r z^r) - k c_k z^k, or its conjugate in z^-r."""
    if k < 1:
        raise ValueError("bracket index must be >= 1")
    gen = SymPoly.cb if conjugated else SymPoly.c
    coeffs = [_SYM_TWO]
    for r in range(1, k + 1):
        scale = rat(k) if r == k else rat(2 * r)
        coeffs.append(gen(r) * scale)
    if conjugated:
        return Series(-k, list(reversed(coeffs)))
    return Series(0, coeffs)


def rhs_coeff(k: int) -> SymPoly:
    """Real part of the constant term of ratio * bracket * conjugate bracket."""
    if k < 1:
        raise ValueError("order must be >= 1")
    prod = flow_ratio(k) * weinstein_bracket(k, False) * weinstein_bracket(k, True)
    x = prod.ct()
    x = x if isinstance(x, SymPoly) else SymPoly.const(x)
    return (x + x.conj()) * HALF


def milin_term(k: int) -> SymPoly:
    """a_k = 4/k - k c_k cb_k, the logarithmic-coefficient functional."""
    return SymPoly.const(rat(4, k)) - SymPoly.c(k) * SymPoly.cb(k) * rat(k)


def lhs_series(max_order: int, flow_sign: int = -1) -> Series:
    """(1+w) d/dt sum a_k w^k at fixed z, with w moving along
    wdot = flow_sign * w(1-w)/(1+w); collapses to
    (1+w) sum D(a_k) w^k + flow_sign * (1-w) sum k a_k w^k."""
    if max_order < 1:
        raise ValueError("order must be >= 1")
    if flow_sign not in (-1, 1):
        raise ValueError("flow_sign must be +1 or -1")
    terms = [milin_term(k) for k in range(1, max_order + 1)]
    dots = Series(1, [t.derivation() for t in terms], max_order + 1)
    scaled = Series(
        1, [t * rat(k) for k, t in enumerate(terms, start=1)], max_order + 1
    )
    one_plus_w = Series(0, [_SYM_ONE, _SYM_ONE])
    one_minus_w = Series(0, [_SYM_ONE, -_SYM_ONE])
    lhs = one_plus_w * dots + (one_minus_w * scaled).scale(rat(flow_sign))
    return lhs.truncate(max_order + 1)


def rhs_series(max_order: int) -> Series:
    """(1-w) sum rhs_coeff(k) w^k, truncated past w^max_order."""
    if max_order < 1:
        raise ValueError("order must be >= 1")
    core = Series(
        1, [rhs_coeff(k) for k in range(1, max_order + 1)], max_order + 1
    )
    one_minus_w = Series(0, [_SYM_ONE, -_SYM_ONE])
    return (one_minus_w * core).truncate(max_order + 1)


@dataclass(frozen=True)
class Fact1Result:
    epsilon: int
    ok: bool
    residuals: dict  # order -> SymPoly (lhs - epsilon * rhs)
    first_failure: int | None


def verify_fact1(max_order: int, flow_sign: int = -1) -> Fact1Result:
    """Compare the two sides coefficientwise in w up to w^max_order.

    epsilon is fixed at w^1 and must work unchanged for every order; a sign
    that varies with the order is a failure, not two successes.
    """
    if max_order < 1:
        raise ValueError("order must be >= 1")
    lhs = lhs_series(max_order, flow_sign)
    rhs = rhs_series(max_order)

    def coeff(series: Series, j: int) -> SymPoly:
        x = series.coeff(j)
        return x if isinstance(x, SymPoly) else SymPoly.const(x)

    l1, r1 = coeff(lhs, 1), coeff(rhs, 1)
    if l1 == r1:
        epsilon = 1
    elif l1 == -r1:
        epsilon = -1
    else:
        epsilon = 1  # recorded, but order 1 already fails below
    residuals = {}
    first_failure = None
    for j in range(1, max_order + 1):
        res = coeff(lhs, j) - coeff(rhs, j) * rat(epsilon)
        residuals[j] = res
        if first_failure is None and not res.is_zero():
            first_failure = j
    return Fact1Result(
        epsilon=epsilon,
        ok=first_failure is None,
        residuals=residuals,
        first_failure=first_failure,
    )


def flow_consistency_ok() -> bool:
    """d/dt of e^t w/(1-w)^2 vanishes along wdot = -w(1-w)/(1+w):
    w/(1-w)^2 == w(1-w)(1+w) / ((1+w)(1-w)^3) as exact rational functions."""
    w = Poly.var()
    one = Poly.one()
    lhs_num, lhs_den = w, (one - w) ** 2
    rhs_num, rhs_den = w * (one - w) * (one + w), (one + w) * (one - w) ** 3
    return lhs_num * rhs_den == rhs_num * lhs_den
