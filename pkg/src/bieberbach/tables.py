"""Coefficient tables of the trivariate kernel (1 - z(2c + (1-c)(w + 1/w)) + z^2)^p.

The -1/2 power yields the B table, the -1 power the A table. Each table is
built by two independent routes and cross-checked exactly:

* B: inverse square root of the kernel series, versus the Legendre-style
  three-term recurrence on the rows;
* A: series inverse of the kernel, versus the convolution square of B.

Extraction follows the doubled-k0 convention: the w^0 coefficient of the
z^n row equals twice the (0, n) entry, while the w^k coefficient (k >= 1)
is the (k, n) entry itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .laurent import Laurent
from .poly import Poly
from .rationals import HALF, is_rat, rat
from .series import Series, series_inv_sqrt, series_inverse

POWER_MINUS_HALF = "-1/2"
POWER_MINUS_ONE = "-1"

DOUBLED_K0 = "doubled-k0"

_P_ONE = Poly.one()
_P_C = Poly.var()
_P_HALF_1MC = Poly((HALF, -HALF))  # (1-c)/2


def x_tilde() -> Laurent:
    """c + (1-c)(w + 1/w)/2, the Legendre argument of the kernel."""
    return Laurent(-1, (_P_HALF_1MC, _P_C, _P_HALF_1MC))


def kernel_series() -> Series:
    """1 - z*(2c + (1-c)(w + 1/w)) + z^2 as an exact series in z."""
    two_xt = x_tilde() * rat(2)
    return Series(0, (Laurent.const(_P_ONE), -two_xt, Laurent.const(_P_ONE)))


def _as_laurent(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    if x == 0:
        return Laurent.zero()
    return Laurent.const(x)


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if is_rat(x):
        return Poly.const(x)
    raise TypeError(f"not a polynomial coefficient: {x!r}")


@dataclass(frozen=True)
class KernelExpansion:
    """Rows of the kernel power: row n is the z^n coefficient, Laurent in w."""

    power: str
    max_n: int
    rows: tuple[Laurent, ...]

    def row(self, n: int) -> Laurent:
        return self.rows[n]


def expand_minus_half(max_n: int) -> KernelExpansion:
    """B-side expansion via the exact inverse square root of the kernel."""
    g = series_inv_sqrt(kernel_series(), max_n + 1)
    rows = tuple(_as_laurent(g.coeff(n)) for n in range(max_n + 1))
    return KernelExpansion(POWER_MINUS_HALF, max_n, rows)


def expand_minus_half_rec(max_n: int) -> KernelExpansion:
    """B-side expansion via the three-term recurrence
    (n+1) row_{n+1} = (2n+1) x~ row_n - n row_{n-1}, entirely in Laurent arithmetic."""
    xt = x_tilde()
    rows = [Laurent.const(_P_ONE)]
    if max_n >= 1:
        rows.append(xt)
    for n in range(1, max_n):
        nxt = (xt * rows[n]) * rat(2 * n + 1) - rows[n - 1] * rat(n)
        rows.append(nxt * rat(1, n + 1))
    return KernelExpansion(POWER_MINUS_HALF, max_n, tuple(rows))


def expand_minus_one(max_n: int) -> KernelExpansion:
    """A-side expansion via the exact series inverse of the kernel."""
    g = series_inverse(kernel_series(), max_n + 1)
    rows = tuple(_as_laurent(g.coeff(n)) for n in range(max_n + 1))
    return KernelExpansion(POWER_MINUS_ONE, max_n, rows)


class TableMismatch(Exception):
    """Two tables that must agree differ; carries the first differing (k, n)."""

    def __init__(self, k: int, n: int):
        super().__init__(f"tables differ first at (k, n) = ({k}, {n})")
        self.k = k
        self.n = n


@dataclass(frozen=True)
class CoeffTable:
    """Entries (k, n) -> polynomial in c, 0 <= k <= n <= max_n."""

    kind: str  # "A" or "B"
    max_n: int
    entries: dict = field(repr=False)
    convention: str = DOUBLED_K0

    @staticmethod
    def from_expansion(kind: str, exp: KernelExpansion) -> "CoeffTable":
        entries = {}
        for n in range(exp.max_n + 1):
            row = exp.row(n)
            for k in range(n + 1):
                p = _as_poly(row.coeff(k))
                entries[(k, n)] = p * HALF if k == 0 else p
        return CoeffTable(kind, exp.max_n, entries)

    def entry(self, k: int, n: int) -> Poly:
        return self.entries[(k, n)]

    def row(self, n: int) -> Laurent:
        """Reconstruct the z^n row from the stored entries."""
        coeffs = [Poly.zero()] * (2 * n + 1)
        coeffs[n] = self.entries[(0, n)] * rat(2)
        for k in range(1, n + 1):
            coeffs[n + k] = self.entries[(k, n)]
            coeffs[n - k] = self.entries[(k, n)]
        return Laurent(-n, coeffs)

    def column(self, k: int) -> list[Poly]:
        """Entries (k, n) for n = k .. max_n."""
        return [self.entries[(k, n)] for n in range(k, self.max_n + 1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffTable):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.max_n == other.max_n
            and self.convention == other.convention
            and self.entries == other.entries
        )


def build_b_table(max_n: int) -> CoeffTable:
    """B table via the inverse-square-root route."""
    return CoeffTable.from_expansion("B", expand_minus_half(max_n))


def build_b_table_rec(max_n: int) -> CoeffTable:
    """B table via the three-term recurrence route (independent cross-check)."""
    return CoeffTable.from_expansion("B", expand_minus_half_rec(max_n))


def build_a_table(max_n: int) -> CoeffTable:
    """A table via the series-inverse route."""
    return CoeffTable.from_expansion("A", expand_minus_one(max_n))


def a_via_convolution(b_table: CoeffTable) -> CoeffTable:
    """A rows rebuilt as sums of products of B rows (the -1 power is the
    square of the -1/2 power)."""
    max_n = b_table.max_n
    brows = [b_table.row(n) for n in range(max_n + 1)]
    entries = {}
    for n in range(max_n + 1):
        row = Laurent.zero()
        for i in range(n + 1):
            row = row + brows[i] * brows[n - i]
        for k in range(n + 1):
            p = _as_poly(row.coeff(k))
            entries[(k, n)] = p * HALF if k == 0 else p
    return CoeffTable("A", max_n, entries)


def cross_check(t1: CoeffTable, t2: CoeffTable) -> None:
    """Exact entrywise comparison; raises TableMismatch at the first difference."""
    if t1.max_n != t2.max_n:
        raise TableMismatch(0, min(t1.max_n, t2.max_n) + 1)
    for n in range(t1.max_n + 1):
        for k in range(n + 1):
            if t1.entry(k, n) != t2.entry(k, n):
                raise TableMismatch(k, n)


def expansion_is_symmetric(exp: KernelExpansion) -> bool:
    """Every row fixed by w -> 1/w and supported inside [-n, n]."""
    for n, row in enumerate(exp.rows):
        if row.reflect() != row:
            return False
        if not row.is_zero() and (row.lo < -n or row.hi > n):
            return False
    return True
