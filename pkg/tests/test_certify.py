"""Square certificates, Yun decomposition, and Sturm root counting."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bieberbach.certify import (
    NegativeSigma,
    NotASquareTimesKernel,
    ZeroPolynomial,
    certify_fact2,
    fraction_nonneg_open01,
    square_certificate,
    sturm_count,
    yun_squarefree,
)
from bieberbach.poly import Poly
from bieberbach.rationals import rat
from bieberbach.tables import build_a_table, build_b_table


# -- Yun square-free decomposition --------------------------------------------


def test_yun_double_root():
    content, factors = yun_squarefree(Poly((1, -2, 1)))  # (c-1)^2
    assert content == 1
    assert factors == [(Poly((-1, 1)), 2)]


def test_yun_single_variable():
    content, factors = yun_squarefree(Poly((0, 1)))
    assert content == 1
    assert factors == [(Poly((0, 1)), 1)]


def test_yun_constructed_input():
    # (9c^2 - 6c + 1)(1 - c)/8 = (3c-1)^2 (1-c)/8; factors carry positive
    # leading coefficients, so the content absorbs the sign: -(c-1)/8
    p = Poly((rat(1, 8), rat(-6, 8), rat(9, 8))) * Poly((1, -1))
    content, factors = yun_squarefree(p)
    assert content == rat(-1, 8)
    assert sorted(factors, key=lambda t: t[1]) == [
        (Poly((-1, 1)), 1),
        (Poly((-1, 3)), 2),
    ]
    rebuilt = Poly.const(content)
    for f, m in factors:
        rebuilt = rebuilt * f**m
    assert rebuilt == p


def test_yun_zero_rejected():
    with pytest.raises(ZeroPolynomial):
        yun_squarefree(Poly(()))


@settings(deadline=None, max_examples=40)
@given(
    roots=st.lists(
        st.tuples(
            st.integers(min_value=-4, max_value=4),
            st.integers(min_value=1, max_value=5),
        ),
        min_size=1,
        max_size=4,
    )
)
def test_yun_reconstructs_random_products(roots):
    p = Poly((rat(1, 3),))
    for r, m in roots:
        p = p * Poly((-rat(r), rat(1))) ** m
    content, factors = yun_squarefree(p)
    rebuilt = Poly.const(content)
    for f, m in factors:
        rebuilt = rebuilt * f**m
    assert rebuilt == p
    # factors pairwise coprime and squarefree
    for i, (f, _) in enumerate(factors):
        assert f.squarefree_part() == f.primitive()
        for g, _ in factors[i + 1 :]:
            from bieberbach.poly import poly_gcd

            assert poly_gcd(f, g).degree == 0


# -- square certificates -------------------------------------------------------


def test_certificate_spec_cases():
    b11 = Poly((rat(1, 2), rat(-1, 2)))
    cert = square_certificate(b11, 1, 1)
    assert (cert.sigma, cert.alpha, cert.beta, cert.s) == (rat(1, 2), 0, 1, Poly.one())

    b02 = Poly((rat(1, 8), rat(-6, 8), rat(9, 8)))
    cert = square_certificate(b02, 0, 2)
    assert (cert.sigma, cert.alpha, cert.beta, cert.s) == (
        rat(1, 8),
        0,
        0,
        Poly((-1, 3)),
    )

    # 15 c (1-c)^2 / 8, the brute-force value of the (2, 3) entry
    b23 = Poly((0, rat(15, 8), rat(-30, 8), rat(15, 8)))
    cert = square_certificate(b23, 2, 3)
    assert (cert.sigma, cert.alpha, cert.beta, cert.s) == (
        rat(15, 8),
        1,
        0,
        Poly((-1, 1)),
    )
    assert cert.polynomial() == b23


def test_certificate_rejects_foreign_kernel():
    with pytest.raises(NotASquareTimesKernel):
        square_certificate(Poly((1, 1)), 0, 0)  # c + 1


def test_certificate_rejects_negative_constant():
    with pytest.raises(NegativeSigma):
        square_certificate(Poly((0, 0, -1)), 0, 0)  # -c^2


def test_certificate_zero_rejected():
    with pytest.raises(ZeroPolynomial):
        square_certificate(Poly(()), 0, 0)


# -- Sturm --------------------------------------------------------------------


def test_sturm_spec_cases():
    v = sturm_count(Poly((-1, 3)), 0, 1)  # 3c - 1
    assert v.root_count == 1 and not v.nonnegative

    v = sturm_count(Poly((1, 0, 1)), 0, 1)  # c^2 + 1
    assert v.root_count == 0 and v.nonnegative

    v = sturm_count(Poly((0, 1, -1)), 0, 1)  # c(1-c): roots at the endpoints
    assert v.root_count == 0 and v.nonnegative


def test_sturm_zero_rejected():
    with pytest.raises(ZeroPolynomial):
        sturm_count(Poly(()), 0, 1)


def test_sturm_sign_change_detected_with_touching_root():
    # (c - 1/2)^2 is nonnegative, (c - 1/2)^3 is not
    touch = Poly((rat(-1, 2), 1)) ** 2
    cross = Poly((rat(-1, 2), 1)) ** 3
    assert sturm_count(touch, 0, 1).nonnegative
    v = sturm_count(cross, 0, 1)
    assert v.root_count == 1 and not v.nonnegative


@settings(deadline=None, max_examples=50)
@given(
    roots=st.lists(
        st.fractions(min_value=-3, max_value=4, max_denominator=8),
        min_size=1,
        max_size=5,
    ),
    mults=st.lists(st.integers(min_value=1, max_value=3), min_size=5, max_size=5),
)
def test_sturm_exact_on_known_factorizations(roots, mults):
    p = Poly((1,))
    for r, m in zip(roots, mults):
        p = p * Poly((-rat(r), rat(1))) ** m
    lo, hi = rat(0), rat(1)
    inside = {r for r in roots if lo < rat(r) < hi}
    v = sturm_count(p, lo, hi)
    assert v.root_count == len(inside)


def test_fraction_nonneg_open01():
    assert fraction_nonneg_open01(Poly((0, 1)), Poly((1,)))  # c >= 0 on (0,1)
    assert not fraction_nonneg_open01(Poly((-1, 3)), Poly((1,)))  # 3c-1
    assert fraction_nonneg_open01(Poly(()), Poly((1, 1)))  # zero function


# -- full Fact 2 certification --------------------------------------------------


def test_certify_fact2_small(b8, a8):
    report = certify_fact2(b8, a8, sturm_max_n=8)
    assert report.ok
    assert len(report.certificates) == 45
    assert report.pattern_ok
    assert report.a_convolution_ok
    assert report.sturm_ok
    # reconstruction and the exponent pattern, entry by entry
    for (k, n), cert in report.certificates.items():
        assert cert.polynomial() == b8.entry(k, n)
        assert cert.alpha == (n - k) % 2
        assert cert.beta == k % 2


def test_certified_entries_nonnegative_on_101_points(b8):
    report = certify_fact2(b8, build_a_table(8), sturm_max_n=0)
    for (k, n), cert in report.certificates.items():
        p = b8.entry(k, n)
        for i in range(101):
            assert p.eval(rat(i, 100)) >= 0


def test_certify_degenerate_table():
    b = build_b_table(0)
    a = build_a_table(0)
    report = certify_fact2(b, a, sturm_max_n=0)
    assert report.ok
    assert list(report.certificates) == [(0, 0)]
    cert = report.certificates[(0, 0)]
    assert (cert.sigma, cert.alpha, cert.beta, cert.s) == (
        rat(1, 2),
        0,
        0,
        Poly.one(),
    )


def test_certify_sturm_covers_a11(b8, a8):
    report = certify_fact2(b8, a8, sturm_max_n=2)
    verdict = report.sturm_verdicts[(1, 1)]
    assert verdict.nonnegative and verdict.root_count == 0
