"""Independent brute-force oracles used to freeze expected table values.

Deliberately avoids the library's Newton iteration, series inversion, and
three-term recurrences: rows come straight from the generalized binomial
theorem applied to (1 + u)^alpha with u = z^2 - t z,
t = 2c + (1-c)(w + 1/w).
"""

from math import comb

from bieberbach.laurent import Laurent
from bieberbach.poly import Poly
from bieberbach.rationals import HALF, rat


def binomial_alpha(alpha, j: int):
    """Generalized binomial coefficient alpha choose j, exact."""
    out = rat(1)
    for i in range(j):
        out = out * (alpha - i) / (i + 1)
    return out


def t_laurent() -> Laurent:
    """2c + (1-c)(w + 1/w)."""
    one_minus_c = Poly((1, -1))
    return Laurent(-1, (one_minus_c, Poly((0, 2)), one_minus_c))


def _laurent_pow(base: Laurent, e: int) -> Laurent:
    out = Laurent.const(Poly.one())
    for _ in range(e):
        out = out * base
    return out


def kernel_row(alpha, m: int) -> Laurent:
    """z^m coefficient of (1 - t z + z^2)^alpha by explicit binomial sums.

    u^j = (z^2 - t z)^j spreads over z^j .. z^2j; the z^m part picks
    i = m - j factors of z^2, leaving (-t)^(2j - m).
    """
    t = t_laurent()
    total = Laurent.zero()
    for j in range((m + 1) // 2, m + 1):
        i = m - j
        scale = binomial_alpha(alpha, j) * comb(j, i) * rat((-1) ** (2 * j - m))
        total = total + _laurent_pow(t, 2 * j - m) * scale
    return total


def b_entry_oracle(k: int, n: int) -> Poly:
    row = kernel_row(rat(-1, 2), n)
    p = row.coeff(k)
    p = p if isinstance(p, Poly) else Poly.const(p)
    return p * HALF if k == 0 else p


def a_entry_oracle(k: int, n: int) -> Poly:
    row = kernel_row(rat(-1), n)
    p = row.coeff(k)
    p = p if isinstance(p, Poly) else Poly.const(p)
    return p * HALF if k == 0 else p
