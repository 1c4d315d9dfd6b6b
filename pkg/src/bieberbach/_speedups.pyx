# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the pure-Python kernels in ``bieberbach.kernels``.

The coefficients stay generic Python objects (exact rationals or
polynomials); the win is removing interpreter overhead from the tight
double loops that dominate table construction.
"""


def conv(list a, list b):
    """Full convolution of two nonempty coefficient lists."""
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    cdef list out = [0] * (la + lb - 1)
    cdef object x, y
    for i in range(la):
        x = a[i]
        if x == 0:
            continue
        for j in range(lb):
            y = b[j]
            if y == 0:
                continue
            out[i + j] = out[i + j] + x * y
    return out


def conv_trunc(list a, list b, Py_ssize_t n):
    """First ``n`` coefficients of the convolution of ``a`` and ``b``."""
    cdef Py_ssize_t la = len(a), lb = len(b), i, j, m, top
    m = la + lb - 1
    if n < m:
        m = n
    cdef list out = [0] * m
    cdef object x, y
    for i in range(la):
        if i >= m:
            break
        x = a[i]
        if x == 0:
            continue
        top = lb
        if m - i < top:
            top = m - i
        for j in range(top):
            y = b[j]
            if y == 0:
                continue
            out[i + j] = out[i + j] + x * y
    return out


def dot(list a, list b):
    """Sum of elementwise products; lists must have equal length."""
    cdef Py_ssize_t n = len(a), i
    cdef object acc = 0, x
    for i in range(n):
        x = a[i]
        if x == 0:
            continue
        acc = acc + x * b[i]
    return acc
