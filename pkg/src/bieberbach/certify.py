"""Positivity certificates for the kernel coefficient tables.

Every B entry is written as sigma * c^alpha * (1-c)^beta * S(c)^2 with
sigma >= 0 (square detection by Yun's square-free decomposition; the odd
part must be one of the four kernels real-and-nonnegative on [0, 1]).
A entries are certified twice: once through the convolution-of-squares
identity against the B table, once by exact Sturm root counting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import C, ONE_MINUS_C, Poly, poly_gcd
from .rationals import Rat, rat, rat_sign
from .tables import CoeffTable, TableMismatch, a_via_convolution

_KERNEL_ONE = Poly.one()
_KERNEL_C = Poly((0, 1))
_KERNEL_C_MINUS_1 = Poly((-1, 1))
_KERNEL_C2_MINUS_C = Poly((0, -1, 1))


class ZeroPolynomial(ValueError):
    """Operation undefined for the identically-zero polynomial."""


class NotASquareTimesKernel(Exception):
    """The odd square-free part is outside {1, c, 1-c, c(1-c)}."""

    def __init__(self, k: int, n: int, kernel: Poly):
        super().__init__(
            f"entry ({k}, {n}): odd square-free part {kernel.to_str()} "
            "is not one of 1, c, 1-c, c(1-c)"
        )
        self.k = k
        self.n = n
        self.kernel = kernel


class NegativeSigma(Exception):
    """The certificate constant came out negative; falsifies positivity."""

    def __init__(self, k: int, n: int, sigma):
        super().__init__(f"entry ({k}, {n}): sigma = {sigma} < 0")
        self.k = k
        self.n = n
        self.sigma = sigma


def yun_squarefree(p: Poly) -> tuple[Rat, list[tuple[Poly, int]]]:
    """Square-free decomposition p = content * prod factor_i^mult_i.

    Factors are pairwise coprime, square-free, primitive with positive
    leading coefficient; the rational content carries the sign.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot decompose the zero polynomial")
    content = p.content()
    prim = p.primitive()
    if prim.degree == 0:
        return content, []
    factors = []
    g = poly_gcd(prim, prim.derivative())
    b = prim.exact_div(g).primitive()
    d = prim.derivative().exact_div(g) - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            factors.append((a, i))
        b = b.exact_div(a).primitive()
        d = d.exact_div(a) - b.derivative()
        i += 1
    prod = Poly.one()
    for f, m in factors:
        prod = prod * f**m
    scale = prim.exact_div(prod)
    if scale.degree != 0:
        raise AssertionError("square-free reconstruction drifted")
    return content * scale.coeffs[0], factors


@dataclass(frozen=True)
class SquareCert:
    """sigma * c^alpha * (1-c)^beta * s(c)^2 == the certified entry, sigma >= 0."""

    sigma: object
    alpha: int
    beta: int
    s: Poly
    source: tuple[int, int]

    def polynomial(self) -> Poly:
        out = self.s * self.s * self.sigma
        if self.alpha:
            out = out * C
        if self.beta:
            out = out * ONE_MINUS_C
        return out


def square_certificate(p: Poly, k: int, n: int) -> SquareCert:
    """Certificate that p is a square times a kernel nonnegative on [0, 1]."""
    if p.is_zero():
        raise ZeroPolynomial(f"entry ({k}, {n}) is identically zero")
    content, factors = yun_squarefree(p)
    s = Poly.one()
    kernel = Poly.one()
    for f, m in factors:
        if m // 2:
            s = s * f ** (m // 2)
        if m % 2:
            kernel = kernel * f
    sigma = content
    if kernel == _KERNEL_ONE:
        alpha, beta = 0, 0
    elif kernel == _KERNEL_C:
        alpha, beta = 1, 0
    elif kernel == _KERNEL_C_MINUS_1:
        alpha, beta = 0, 1
        sigma = -sigma
    elif kernel == _KERNEL_C2_MINUS_C:
        alpha, beta = 1, 1
        sigma = -sigma
    else:
        raise NotASquareTimesKernel(k, n, kernel)
    if sigma < 0:
        raise NegativeSigma(k, n, sigma)
    return SquareCert(sigma, alpha, beta, s, (k, n))


# ---------------------------------------------------------------------------
# Sturm chains and exact root counting


def sturm_chain(p: Poly) -> list[Poly]:
    """Signed remainder chain of p; entries rescaled by positive constants only."""
    chain = [p.scale_reduce()]
    d = p.derivative()
    if d.is_zero():
        return chain
    chain.append(d.scale_reduce())
    while chain[-1].degree > 0:
        r = chain[-2].divrem(chain[-1])[1]
        if r.is_zero():
            break
        chain.append((-r).scale_reduce())
    return chain


def sign_changes(chain: list[Poly], x) -> int:
    signs = [rat_sign(q.eval(x)) for q in chain]
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a * b < 0)


def _count_open(chain: list[Poly], a, b) -> int:
    # requires chain[0](a) != 0 != chain[0](b); counts roots in (a, b)
    return sign_changes(chain, a) - sign_changes(chain, b)


def _nonroot_point(q: Poly, a, b):
    """Deterministic rational point in (a, b) where q does not vanish."""
    den = 2
    while True:
        for num in range(1, den):
            x = a + (b - a) * rat(num, den)
            if q.eval(x) != 0:
                return x
        den += 1


def _isolate(q: Poly, chain: list[Poly], a, b, count: int) -> list:
    """Disjoint ordered subintervals of (a, b) with one root of q each;
    all endpoints are non-roots of q."""
    if count == 0:
        return []
    if count == 1:
        return [(a, b)]
    m = _nonroot_point(q, a, b)
    left = _count_open(chain, a, m)
    return _isolate(q, chain, a, m, left) + _isolate(q, chain, m, b, count - left)


def _shrink_away_from(q, chain, a, b, side_lo, side_hi):
    """Bisect a one-root interval until a > side_lo (if asked) and b < side_hi."""
    while (side_lo is not None and a == side_lo) or (side_hi is not None and b == side_hi):
        m = _nonroot_point(q, a, b)
        if _count_open(chain, a, m) == 1:
            b = m
        else:
            a = m
    return a, b


@dataclass(frozen=True)
class SturmVerdict:
    """Exact root count of a polynomial on an open interval plus the sign
    samples that decide nonnegativity on the closed interval."""

    polynomial: Poly
    interval: tuple
    root_count: int
    sign_samples: tuple  # ((point, sign), ...) sorted by point
    nonnegative: bool  # on the closed interval
    nonnegative_open: bool  # on the open interval


def sturm_count(p: Poly, lo, hi) -> SturmVerdict:
    """Count distinct real roots of p in (lo, hi) and certify its sign.

    Roots are counted on the squarefree part via Sturm's theorem, then
    isolated so that one exact sample can be taken strictly between any
    two consecutive roots; together with the endpoint values this decides
    nonnegativity on [lo, hi] (and on the open interval) rigorously.
    """
    if p.is_zero():
        raise ZeroPolynomial("Sturm count of the zero polynomial")
    lo, hi = rat(lo), rat(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    q = p.squarefree_part()
    # roots exactly at the endpoints are deflated; q is squarefree so one
    # division each suffices, the loop only guards the invariant
    for point in (lo, hi):
        while q.degree > 0 and q.eval(point) == 0:
            q = q.exact_div(Poly((-point, 1))).primitive()
    if q.degree <= 0:
        count = 0
        intervals = []
        chain = None
    else:
        chain = sturm_chain(q)
        count = _count_open(chain, lo, hi)
        intervals = _isolate(q, chain, lo, hi, count)
    # one sample per gap between consecutive roots (and around them)
    if count == 0:
        gap_points = [_nonroot_point(q, lo, hi)]
    else:
        first = _shrink_away_from(q, chain, *intervals[0], lo, None)
        intervals[0] = first
        last = _shrink_away_from(q, chain, *intervals[-1], None, hi)
        intervals[-1] = last
        gap_points = [intervals[0][0]] + [b for _, b in intervals]
    gap_signs = [rat_sign(p.eval(x)) for x in gap_points]
    samples = [(lo, rat_sign(p.eval(lo))), (hi, rat_sign(p.eval(hi)))]
    samples += list(zip(gap_points, gap_signs))
    samples.sort(key=lambda t: t[0])
    nonneg_open = all(s > 0 for s in gap_signs)
    nonneg = nonneg_open and p.eval(lo) >= 0 and p.eval(hi) >= 0
    return SturmVerdict(
        polynomial=p,
        interval=(lo, hi),
        root_count=count,
        sign_samples=tuple(samples),
        nonnegative=nonneg,
        nonnegative_open=nonneg_open,
    )


def fraction_nonneg_open01(num: Poly, den: Poly) -> bool:
    """Is num/den >= 0 everywhere on (0, 1) where it is defined?"""
    if num.is_zero():
        return True
    if den.is_zero():
        raise ZeroPolynomial("fraction with zero denominator")
    return sturm_count(num * den, 0, 1).nonnegative_open


# ---------------------------------------------------------------------------
# Full Fact 2 certification


@dataclass
class Fact2Report:
    max_n: int
    convention: str
    certificates: dict  # (k, n) -> SquareCert
    first_failure: tuple | None  # (k, n, message)
    a_convolution_ok: bool
    a_first_mismatch: tuple | None
    pattern_ok: bool
    sturm_max_n: int
    sturm_verdicts: dict  # (k, n) -> SturmVerdict for n <= sturm_max_n
    sturm_ok: bool
    ok: bool


def certify_fact2(
    b_table: CoeffTable, a_table: CoeffTable, sturm_max_n: int = 12
) -> Fact2Report:
    """Certify every B entry as a square times an allowed kernel, conclude
    A-positivity from the convolution identity, and independently Sturm-
    certify the A entries up to the configured budget."""
    if (
        b_table.max_n != a_table.max_n
        or b_table.convention != a_table.convention
    ):
        raise ValueError("tables must share max_n and convention")
    max_n = b_table.max_n
    certs = {}
    first_failure = None
    pattern_ok = True
    for n in range(max_n + 1):
        for k in range(n + 1):
            try:
                cert = square_certificate(b_table.entry(k, n), k, n)
            except (ZeroPolynomial, NotASquareTimesKernel, NegativeSigma) as exc:
                first_failure = (k, n, str(exc))
                break
            if cert.polynomial() != b_table.entry(k, n):
                first_failure = (k, n, "certificate does not reconstruct the entry")
                break
            certs[(k, n)] = cert
            if cert.alpha != (n - k) % 2 or cert.beta != k % 2:
                pattern_ok = False
        if first_failure:
            break

    a_conv_ok = True
    a_mismatch = None
    try:
        conv = a_via_convolution(b_table)
        from .tables import cross_check

        cross_check(conv, a_table)
    except TableMismatch as exc:
        a_conv_ok = False
        a_mismatch = (exc.k, exc.n)

    sturm_verdicts = {}
    sturm_ok = True
    for n in range(min(max_n, sturm_max_n) + 1):
        for k in range(n + 1):
            verdict = sturm_count(a_table.entry(k, n), 0, 1)
            sturm_verdicts[(k, n)] = verdict
            if not verdict.nonnegative:
                sturm_ok = False

    ok = first_failure is None and a_conv_ok and sturm_ok and pattern_ok
    return Fact2Report(
        max_n=max_n,
        convention=b_table.convention,
        certificates=certs,
        first_failure=first_failure,
        a_convolution_ok=a_conv_ok,
        a_first_mismatch=a_mismatch,
        pattern_ok=pattern_ok,
        sturm_max_n=sturm_max_n,
        sturm_verdicts=sturm_verdicts,
        sturm_ok=sturm_ok,
        ok=ok,
    )
