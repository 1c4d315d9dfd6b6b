"""Recurrence guessing, exact verification, product closure, and
symmetric-square certificates."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bieberbach.bipoly import BiPoly, RatFunc, bipoly_divexact, bipoly_gcd
from bieberbach.holonomic import (
    DegenerateLeadingCoefficient,
    GuessNotFound,
    OrderMismatch,
    RecOp,
    SeqSlice,
    SymSquareNotFound,
    guess_rec,
    initial_value_bridge,
    op_equal,
    op_from_int_rows,
    product_closure,
    rec_verify,
    sym_square_root,
)
from bieberbach.poly import Poly
from bieberbach.rationals import rat
from bieberbach.tables import build_b_table_rec

FIB_SQUARES = [0, 1, 1, 4, 9, 25, 64, 169]
FIB_SQ_OP = op_from_int_rows([[1], [-2], [-2], [1]])  # E^3 - 2E^2 - 2E + 1


# -- bivariate support ----------------------------------------------------------


def test_bipoly_gcd_and_division():
    n, c = BiPoly.var_n(), BiPoly.var_c()
    a = (n + c) * (n - 1) * (n - 1)
    b = (n + c) * (n - 1) * (c + 2)
    g = bipoly_gcd(a, b)
    assert g == (n + c) * (n - 1)
    assert bipoly_divexact(a, g) == n - 1
    with pytest.raises(ValueError):
        bipoly_divexact(a + BiPoly.one(), g)


def test_bipoly_shift():
    n = BiPoly.var_n()
    p = n * n
    assert p.shift_n() == n * n + n * 2 + BiPoly.one()
    assert p.shift_n(-1).shift_n(1) == p


def test_ratfunc_reduction_and_equality():
    n = BiPoly.var_n()
    f = RatFunc((n + 1) * (n + 2), (n + 2) * (n + 3))
    g = RatFunc(n + 1, n + 3)
    assert f == g
    assert f.num == n + 1 and f.den == n + 3
    assert (f - g).is_zero()


# -- guessing -------------------------------------------------------------------


def test_guess_geometric():
    op = guess_rec(SeqSlice.make(0, [1, 2, 4, 8, 16]), 3, 0, 0)
    assert op_equal(op, op_from_int_rows([[-2], [1]]))


def test_guess_factorial():
    op = guess_rec(SeqSlice.make(0, [1, 1, 2, 6, 24, 120]), 2, 1, 0)
    # a_{n+1} - (n+1) a_n = 0
    expected = RecOp.make([BiPoly({(0, 0): -1, (1, 0): -1}), BiPoly.one()])
    assert op_equal(op, expected)


def test_guess_fibonacci_squares():
    op = guess_rec(SeqSlice.make(0, FIB_SQUARES), 3, 0, 0)
    assert op_equal(op, FIB_SQ_OP)


def test_guess_not_found_within_bounds():
    # primes are not P-recursive with such tiny bounds
    with pytest.raises(GuessNotFound):
        guess_rec(SeqSlice.make(0, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]), 2, 1, 0)


def test_guess_is_deterministic():
    s = SeqSlice.make(0, FIB_SQUARES)
    assert op_equal(guess_rec(s, 3, 1, 0), guess_rec(s, 3, 1, 0))


def test_guess_b_column_order_three():
    table = build_b_table_rec(40)
    column = table.column(0)
    op = guess_rec(SeqSlice.make(0, column[:21]), 3, 8, 3)
    assert op.order == 3
    assert rec_verify(op, SeqSlice.make(0, column)).ok


# -- verification ----------------------------------------------------------------


def test_rec_verify_spec_cases():
    e2 = op_from_int_rows([[-2], [1]])
    assert rec_verify(e2, SeqSlice.make(0, [1, 2, 4, 8])).ok
    bad = rec_verify(e2, SeqSlice.make(0, [1, 2, 5]))
    assert not bad.ok and bad.first_failure == 1


def test_rec_verify_flags_leading_zeros():
    # (n-2) a_{n+1} - (n-1) a_n: the relation holds for 2, 1, 0, 1, 2, 3 at
    # every n, and the leading-coefficient zero at n = 2 is reported
    op = RecOp.make(
        [BiPoly({(1, 0): -1, (0, 0): 1}), BiPoly({(1, 0): 1, (0, 0): -2})]
    )
    res = rec_verify(op, SeqSlice.make(0, [2, 1, 0, 1, 2, 3]))
    assert res.ok and res.leading_zero_ns == (2,)


# -- product closure --------------------------------------------------------------


def test_closure_fibonacci_squares():
    fib = op_from_int_rows([[-1], [-1], [1]])
    clos = product_closure(fib, fib)
    assert op_equal(clos, FIB_SQ_OP)
    assert rec_verify(clos, SeqSlice.make(0, _fib_squares(50))).ok


def _fib_squares(count):
    xs = [0, 1]
    while len(xs) < count:
        xs.append(xs[-1] + xs[-2])
    return [x * x for x in xs[:count]]


def test_closure_geometric_pairs():
    e2 = op_from_int_rows([[-2], [1]])
    e3 = op_from_int_rows([[-3], [1]])
    assert op_equal(product_closure(e2, e3), op_from_int_rows([[-6], [1]]))
    e1 = op_from_int_rows([[-1], [1]])
    assert op_equal(product_closure(e1, e1), e1)


def test_closure_polynomial_coefficients():
    # factorial operator with itself annihilates (n!)^2
    fact = RecOp.make([BiPoly({(0, 0): -1, (1, 0): -1}), BiPoly.one()])
    clos = product_closure(fact, fact)
    seq = [rat(1)]
    for n in range(30):
        seq.append(seq[-1] * (n + 1))
    squares = [x * x for x in seq]
    assert rec_verify(clos, SeqSlice.make(0, squares)).ok


def test_closure_rejects_zero_leading():
    with pytest.raises(ValueError):
        RecOp.make([BiPoly.one(), BiPoly.zero()])


@settings(deadline=None, max_examples=20)
@given(
    coeffs=st.tuples(
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=-3, max_value=3),
    ),
    init=st.tuples(
        st.integers(min_value=-5, max_value=5),
        st.integers(min_value=-5, max_value=5),
        st.integers(min_value=-5, max_value=5),
        st.integers(min_value=-5, max_value=5),
    ),
)
def test_closure_soundness_random_order2(coeffs, init):
    p0, p1, q0, q1 = coeffs
    if p0 == 0 or q0 == 0:
        return  # keep both operators honestly order 2 with nonzero p_0
    op1 = op_from_int_rows([[p0], [p1], [1]])
    op2 = op_from_int_rows([[q0], [q1], [1]])
    xs = [rat(init[0]), rat(init[1])]
    ys = [rat(init[2]), rat(init[3])]
    for _ in range(50):
        xs.append(-p1 * xs[-1] - p0 * xs[-2])
        ys.append(-q1 * ys[-1] - q0 * ys[-2])
    prod = [x * y for x, y in zip(xs, ys)]
    clos = product_closure(op1, op2)
    assert rec_verify(clos, SeqSlice.make(0, prod)).ok


# -- symmetric square --------------------------------------------------------------


def test_sym_square_fibonacci():
    cert = sym_square_root(FIB_SQ_OP)
    assert cert.a == RatFunc.const(1)
    assert cert.b2 == RatFunc.const(1)
    assert cert.q == RatFunc.const(1)
    assert op_equal(cert.reconstruct(), FIB_SQ_OP)


def test_sym_square_order_mismatch():
    with pytest.raises(OrderMismatch):
        sym_square_root(op_from_int_rows([[-4], [1]]))


def test_sym_square_not_found():
    with pytest.raises(SymSquareNotFound):
        sym_square_root(op_from_int_rows([[-1], [0], [0], [1]]))  # E^3 - 1


def test_sym_square_rejects_non_square():
    # closure of two different order-2 operators is order <= 4; build an
    # order-3 operator that is not a symmetric square: E^3 - 2E^2 - 2E + 2
    op = op_from_int_rows([[2], [-2], [-2], [1]])
    with pytest.raises(SymSquareNotFound):
        sym_square_root(op)


def test_sym_square_b_column_pipeline():
    k = 1
    table = build_b_table_rec(k + 40)
    column = table.column(k)
    window = SeqSlice.make(k, column[:21], meta="B,k=1")
    op = guess_rec(window, 3, 8, 3)
    full = SeqSlice.make(k, column)
    assert rec_verify(op, full).ok
    cert = sym_square_root(op, check_range=(k, k + 40))
    assert op_equal(cert.reconstruct(), op)
    assert cert.valid_from_n <= k
    assert all(v["A"] and v["B2"] for v in cert.positivity.values())
    assert initial_value_bridge(cert, window)


def test_initial_value_bridge_rejects_wrong_start():
    cert = sym_square_root(FIB_SQ_OP)
    good = SeqSlice.make(0, FIB_SQUARES)
    assert initial_value_bridge(cert, good)
    bad = SeqSlice.make(0, [1, 1, 5])
    assert not initial_value_bridge(cert, bad)


# -- operator equality ---------------------------------------------------------------


def test_op_equal_normalization():
    assert op_equal(op_from_int_rows([[-4], [2]]), op_from_int_rows([[-2], [1]]))
    assert not op_equal(op_from_int_rows([[-2], [1]]), op_from_int_rows([[-3], [1]]))
