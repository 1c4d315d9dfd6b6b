"""P-recursive machinery: guess recurrences from table columns, verify them
exactly, compute product closures, and match order-3 operators against the
symmetric square of an order-2 recurrence.

An operator sum(p_i(n, c) * E^i, i = 0..r) acts on sequences by
sum(p_i(n, c) * a_{n+i}) = 0; coefficients are jointly primitive integer
bivariate polynomials with the leading coefficient positive under graded
lexicographic order (n before c).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bipoly import BiPoly, RatFunc, bipoly_divexact, bipoly_gcd, bipoly_lcm
from .certify import fraction_nonneg_open01
from .poly import Poly
from .rationals import ONE, ZERO, igcd, ilcm_many, rat, rat_sign


class GuessNotFound(LookupError):
    """No ansatz within the given bounds survived verification."""

    def __init__(self, max_order: int, max_deg_n: int, max_deg_c: int):
        super().__init__(
            f"no recurrence up to order {max_order}, deg_n {max_deg_n}, "
            f"deg_c {max_deg_c} fits the data"
        )
        self.bounds = (max_order, max_deg_n, max_deg_c)


class DegenerateLeadingCoefficient(ValueError):
    """Closure reduction would divide by an identically-zero leading coefficient."""


class OrderMismatch(ValueError):
    """The operator does not have the order this operation requires."""


class SymSquareNotFound(LookupError):
    """The matching system has no rational-function solution."""


@dataclass(frozen=True)
class RecOp:
    """Linear recurrence operator with bivariate polynomial coefficients."""

    coeffs: tuple  # p_0 .. p_r as BiPoly, p_r != 0

    @staticmethod
    def make(coeffs) -> "RecOp":
        cs = [c if isinstance(c, BiPoly) else BiPoly.const(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if len(cs) < 2:
            raise ValueError("operator needs order >= 1 and a nonzero leading coefficient")
        # joint polynomial content
        g = BiPoly.zero()
        for p in cs:
            if not p.is_zero():
                g = bipoly_gcd(g, p)
                if g.deg_n == 0 and g.deg_c == 0:
                    break
        if g.deg_n > 0 or g.deg_c > 0:
            cs = [bipoly_divexact(p, g) if not p.is_zero() else p for p in cs]
        # joint rational content
        nums, dens = [], []
        for p in cs:
            for v in p.terms.values():
                nums.append(abs(int(v.numerator)))
                dens.append(int(v.denominator))
        gn = 0
        for x in nums:
            gn = igcd(gn, x)
        scale = rat(ilcm_many(dens), gn)
        cs = [p * scale for p in cs]
        lead = cs[-1]
        if lead.terms[lead.leading_key()] < 0:
            cs = [-p for p in cs]
        return RecOp(tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> BiPoly:
        return self.coeffs[-1]

    def apply_at(self, n0: int, window: list[Poly]) -> Poly:
        """sum(p_i(n0, c) * window[i]); window holds a_{n0} .. a_{n0+r}."""
        acc = Poly.zero()
        for i, p in enumerate(self.coeffs):
            acc = acc + p.eval_n(n0) * window[i]
        return acc

    def __repr__(self) -> str:
        body = "; ".join(f"E^{i}: {p.to_str()}" for i, p in enumerate(self.coeffs))
        return f"RecOp({body})"


def op_equal(op1: RecOp, op2: RecOp) -> bool:
    """Equality after normalization (construction keeps operators normalized)."""
    return op1.coeffs == op2.coeffs


def op_from_int_rows(rows: list[list[int]]) -> RecOp:
    """Convenience: constant-in-c operator from [p_i as n-coefficient lists]."""
    return RecOp.make([BiPoly.from_poly_n(Poly(r)) for r in rows])


@dataclass(frozen=True)
class SeqSlice:
    """Exact values a_{start_n}, a_{start_n + 1}, ... (polynomials in c)."""

    start_n: int
    values: tuple
    meta: str = ""

    @staticmethod
    def make(start_n: int, values, meta: str = "") -> "SeqSlice":
        vals = tuple(v if isinstance(v, Poly) else Poly.const(v) for v in values)
        return SeqSlice(start_n, vals, meta)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    first_failure: int | None
    leading_zero_ns: tuple


def rec_verify(op: RecOp, seq: SeqSlice) -> VerifyResult:
    """Exact check of the operator on every applicable shift of the slice.

    Integer points where the leading coefficient vanishes are reported:
    the relation is still checked there, but forward generation from such
    a point would be ill-defined.
    """
    r = op.order
    if len(seq) < r + 1:
        raise ValueError("slice shorter than order + 1")
    flags = []
    for idx in range(len(seq) - r):
        n0 = seq.start_n + idx
        if op.coeffs[-1].eval_n(n0).is_zero():
            flags.append(n0)
        if not op.apply_at(n0, list(seq.values[idx : idx + r + 1])).is_zero():
            return VerifyResult(False, n0, tuple(flags))
    return VerifyResult(True, None, tuple(flags))


# ---------------------------------------------------------------------------
# Exact nullspace (fraction-free elimination)


def _canonical_vector(x: list) -> list:
    dens = ilcm_many(int(v.denominator) for v in x)
    ints = [int(v * dens) for v in x]
    g = 0
    for v in ints:
        g = igcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return [rat(v) for v in ints]


def _nullspace(rows: list[list], ncols: int) -> list[list]:
    """Basis of the right nullspace over the rationals, one canonical vector
    per free column, via fraction-free (Bareiss) elimination."""
    mat = []
    for row in rows:
        l = ilcm_many(int(v.denominator) for v in row)
        mat.append([int(v * l) for v in row])
    nrows = len(mat)
    piv_cols: list[int] = []
    prev = 1
    rr = 0
    for col in range(ncols):
        sel = None
        for i in range(rr, nrows):
            if mat[i][col]:
                sel = i
                break
        if sel is None:
            continue
        mat[rr], mat[sel] = mat[sel], mat[rr]
        pivot = mat[rr][col]
        for i in range(rr + 1, nrows):
            mi = mat[i]
            f = mi[col]
            row_r = mat[rr]
            for j in range(col + 1, ncols):
                mi[j] = (pivot * mi[j] - f * row_r[j]) // prev
            mi[col] = 0
        prev = pivot
        piv_cols.append(col)
        rr += 1
        if rr == nrows:
            break
    pivset = set(piv_cols)
    basis = []
    for fc in (c for c in range(ncols) if c not in pivset):
        x = [ZERO] * ncols
        x[fc] = ONE
        for k in range(len(piv_cols) - 1, -1, -1):
            pc = piv_cols[k]
            row = mat[k]
            s = ZERO
            for j in range(pc + 1, ncols):
                if row[j] and x[j] != 0:
                    s = s + row[j] * x[j]
            x[pc] = -s / row[pc]
        basis.append(_canonical_vector(x))
    return basis


def _full_nullspace(rows: list[list], ncols: int, head: int) -> list[list]:
    """Nullspace of the whole system, computed as the nullspace of the first
    ``head`` rows refined by the remaining rows (cheap when the head already
    pins the space down)."""
    basis = _nullspace(rows[:head], ncols)
    rest = rows[head:]
    if not basis or not rest:
        return basis
    reduced = [[sum((r[j] * b[j] for j in range(ncols) if r[j] != 0), ZERO) for b in basis] for r in rest]
    combo = _nullspace(reduced, len(basis))
    out = []
    for cvec in combo:
        v = [ZERO] * ncols
        for coef, b in zip(cvec, basis):
            if coef != 0:
                for j in range(ncols):
                    v[j] = v[j] + coef * b[j]
        out.append(_canonical_vector(v))
    return out


# ---------------------------------------------------------------------------
# Guessing


def guess_rec(
    seq: SeqSlice, max_order: int, max_deg_n: int, max_deg_c: int
) -> RecOp:
    """Smallest (order, then total degree) operator that annihilates the
    slice exactly.

    Every shift of the slice is expanded coefficientwise in c into scalar
    equations; the exact nullspace of the fit system is computed by
    fraction-free elimination, and a candidate is accepted only if it
    verifies on the whole slice including the held-out tail.
    """
    L = len(seq)
    values = list(seq.values)
    max_val_deg = max((v.degree for v in values), default=0)
    for r in range(1, max_order + 1):
        positions = L - r
        if positions < 1:
            break
        for d in range(0, max_deg_n + max_deg_c + 1):
            monos = [
                (a, b)
                for a in range(max_deg_n + 1)
                for b in range(max_deg_c + 1)
                if a + b <= d
            ]
            if d > 0 and all(a + b < d for a, b in monos):
                break  # no new monomials at this or any larger budget
            ncols = (r + 1) * len(monos)
            # equations available across all positions
            eq_per_pos = [
                max(v.degree for v in values[idx : idx + r + 1]) + max_deg_c + 1
                for idx in range(positions)
            ]
            if sum(eq_per_pos) < ncols + 1:
                continue  # cannot overdetermine this ansatz
            # hold out a tail of up to r + 2 positions, never starving the fit
            fit_positions = positions
            held = 0
            while (
                held < r + 2
                and fit_positions > 1
                and sum(eq_per_pos[: fit_positions - 1]) >= ncols + 1
            ):
                fit_positions -= 1
                held += 1
            rows = []
            for idx in range(fit_positions):
                n0 = seq.start_n + idx
                npow = [rat(1)]
                for _ in range(max_deg_n):
                    npow.append(npow[-1] * n0)
                deg_here = eq_per_pos[idx] - 1
                for t in range(deg_here + 1):
                    row = []
                    for i in range(r + 1):
                        v = values[idx + i]
                        for (a, b) in monos:
                            row.append(npow[a] * v.coeff(t - b))
                    rows.append(row)
            basis = _full_nullspace(rows, ncols, head=ncols + 8)
            for vec in basis:
                coeffs = []
                pos = 0
                for i in range(r + 1):
                    terms = {}
                    for (a, b) in monos:
                        v = vec[pos]
                        pos += 1
                        if v != 0:
                            terms[(a, b)] = v
                    coeffs.append(BiPoly(terms))
                if coeffs[-1].is_zero():
                    continue
                op = RecOp.make(coeffs)
                if rec_verify(op, seq).ok:
                    return op
    raise GuessNotFound(max_order, max_deg_n, max_deg_c)


# ---------------------------------------------------------------------------
# Product closure


def _shift_reductions(op: RecOp, count: int) -> list[list[RatFunc]]:
    """psi[m][i]: rational-function coefficients with
    x_{n+m} = sum_i psi[m][i](n) x_{n+i}, i < order."""
    r = op.order
    lead = op.coeffs[-1]
    if lead.is_zero():
        raise DegenerateLeadingCoefficient("zero leading coefficient")
    psi = []
    for m in range(min(r, count)):
        psi.append([RatFunc.const(1 if i == m else 0) for i in range(r)])
    rho = [RatFunc(-op.coeffs[i], lead) for i in range(r)]
    for m in range(r, count):
        sh = m - r
        rho_sh = [f.shift_n(sh) for f in rho]
        new = [RatFunc.zero() for _ in range(r)]
        for i in range(r):
            if rho_sh[i].is_zero():
                continue
            base = psi[sh + i]
            for t in range(r):
                if not base[t].is_zero():
                    new[t] = new[t] + rho_sh[i] * base[t]
        psi.append(new)
    return psi


def product_closure(op1: RecOp, op2: RecOp) -> RecOp:
    """Operator annihilating every termwise product of solutions of op1 and
    op2; found as the first linear dependency among shifted products in the
    basis {x_{n+i} y_{n+j}}."""
    r1, r2 = op1.order, op2.order
    dim = r1 * r2
    psi1 = _shift_reductions(op1, dim + 1)
    psi2 = _shift_reductions(op2, dim + 1)
    # echelon over the rational-function field with dependency tracking
    echelon: list[tuple[int, list[RatFunc], list[RatFunc]]] = []
    for m in range(dim + 1):
        vec = [psi1[m][i] * psi2[m][j] for i in range(r1) for j in range(r2)]
        combo = [RatFunc.const(1 if t == m else 0) for t in range(m + 1)]
        for piv, pvec, pcombo in echelon:
            if vec[piv].is_zero():
                continue
            f = vec[piv]
            vec = [a - f * b for a, b in zip(vec, pvec)]
            combo = [
                a - f * (pcombo[t] if t < len(pcombo) else RatFunc.zero())
                for t, a in enumerate(combo)
            ]
        piv = next((i for i, a in enumerate(vec) if not a.is_zero()), None)
        if piv is None:
            # dependency: sum combo[t] * u_{n+t} = 0
            dens = BiPoly.one()
            for q in combo:
                if not q.is_zero():
                    dens = bipoly_lcm(dens, q.den)
            coeffs = [
                q.num * bipoly_divexact(dens, q.den) if not q.is_zero() else BiPoly.zero()
                for q in combo
            ]
            return RecOp.make(coeffs)
        pivval = vec[piv]
        vec_n = [a / pivval for a in vec]
        combo_n = [a / pivval for a in combo]
        echelon.append((piv, vec_n, combo_n))
    raise AssertionError("no dependency found within the closure bound")


# ---------------------------------------------------------------------------
# Symmetric-square certificates


@dataclass(frozen=True)
class SymSquareCert:
    """Certificate that an order-3 operator is the symmetric square of
    L_{n+2} = a_n L_{n+1} + b_n L_n with A = a^2, B2 = b^2,
    Q = a_{n+1} b_{n+1} / a_n, all rational in (n, c)."""

    a: RatFunc
    b2: RatFunc
    q: RatFunc
    valid_from_n: int
    positivity: dict = field(default_factory=dict, compare=False)

    def reconstruct(self) -> RecOp:
        """Rebuild the monic order-3 operator from the matching identities."""
        t2 = self.a.shift_n() + self.q
        t1 = self.b2.shift_n() + self.q * self.a
        t0 = -(self.q * self.b2)
        parts = [-t0, -t1, -t2, RatFunc.const(1)]
        dens = BiPoly.one()
        for f in parts:
            if not f.is_zero():
                dens = bipoly_lcm(dens, f.den)
        coeffs = [
            f.num * bipoly_divexact(dens, f.den) if not f.is_zero() else BiPoly.zero()
            for f in parts
        ]
        return RecOp.make(coeffs)


def _integer_root_horizon(den: BiPoly, scan_from: int, scan_to: int) -> int:
    """First integer from which no scanned integer zero of ``den`` remains."""
    horizon = scan_from
    for n0 in range(scan_from, scan_to + 1):
        if den.eval_n(n0).is_zero():
            horizon = n0 + 1
    return horizon


def sym_square_root(
    T: RecOp, check_range: tuple[int, int] | None = None
) -> SymSquareCert:
    """Solve the matching system for (A, B2, Q) and verify it symbolically.

    The system t2 = A' + Q, t1 = B2' + Q A, t0 = -Q B2, B2' A' = Q^2 A
    (priming = shift n -> n+1) has the unique solution
    Q = t0' t2 (t2 t2' + t1') / (t2' (t0' t2 - t1 t1')) whenever the
    denominators are nonzero; after computing it all four identities are
    checked as exact rational-function equalities.
    """
    if T.order != 3:
        raise OrderMismatch(f"expected order 3, got {T.order}")
    lead = T.coeffs[-1]
    t2 = RatFunc(-T.coeffs[2], lead)
    t1 = RatFunc(-T.coeffs[1], lead)
    t0 = RatFunc(-T.coeffs[0], lead)
    t0s, t1s, t2s = t0.shift_n(), t1.shift_n(), t2.shift_n()
    if t1.is_zero() or t2.is_zero() or t0s.is_zero():
        raise SymSquareNotFound("degenerate coefficients")
    den = t2s * (t0s * t2 - t1 * t1s)
    if den.is_zero():
        raise SymSquareNotFound("matching system is singular")
    q = (t0s * t2 * (t2 * t2s + t1s)) / den
    if q.is_zero():
        raise SymSquareNotFound("matching system forces Q = 0")
    a = (t1 * (t2 - q)) / (q * t2)
    if a.is_zero():
        raise SymSquareNotFound("matching system forces A = 0")
    b2 = -(t0 / q)
    identities = (
        t2 == a.shift_n() + q
        and t1 == b2.shift_n() + q * a
        and t0 == -(q * b2)
        and b2.shift_n() * a.shift_n() == q * q * a
    )
    if not identities:
        raise SymSquareNotFound("matching identities fail: not a symmetric square")
    scan_from, scan_to = check_range if check_range else (0, 0)
    horizon = scan_from
    for f in (a, b2, q):
        horizon = max(horizon, _integer_root_horizon(f.den, scan_from, scan_to))
    positivity = {}
    if check_range:
        for n0 in range(check_range[0], check_range[1] + 1):
            flags = []
            for name, f in (("A", a), ("B2", b2)):
                num, dpoly = f.eval_n(n0)
                if dpoly.is_zero():
                    flags.append((name, False))
                else:
                    flags.append((name, fraction_nonneg_open01(num, dpoly)))
            positivity[n0] = dict(flags)
    return SymSquareCert(a=a, b2=b2, q=q, valid_from_n=horizon, positivity=positivity)


def initial_value_bridge(cert: SymSquareCert, seq: SeqSlice) -> bool:
    """Check that the first three slice values are the squares of an order-2
    solution seeded at the first two: with u = seq starting at n = k, the
    rational identity (u_{k+2} - A(k) u_{k+1} - B2(k) u_k)^2
    = 4 A(k) B2(k) u_{k+1} u_k must hold (the cross term 2 a b L_{k+1} L_k
    is irrational, its square is not)."""
    if len(seq) < 3:
        raise ValueError("need three initial values")
    k = seq.start_n
    u0, u1, u2 = seq.values[0], seq.values[1], seq.values[2]
    num_a, den_a = cert.a.eval_n(k)
    num_b, den_b = cert.b2.eval_n(k)
    if den_a.is_zero() or den_b.is_zero():
        return False
    lhs = u2 * den_a * den_b - num_a * den_b * u1 - num_b * den_a * u0
    rhs = u1 * u0 * num_a * den_a * num_b * den_b * rat(4)
    return lhs * lhs == rhs
