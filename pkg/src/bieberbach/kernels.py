"""Hot inner loops: dense convolution and dot products of coefficient lists.

The coefficients are arbitrary exact objects (rationals, polynomials,
Laurent polynomials, symbol polynomials) that support ``+`` and ``*``.
A compiled Cython twin (``bieberbach._speedups``) replaces the pure-Python
versions at import time when available; set ``BIEBERBACH_PURE=1`` to force
the pure implementations. ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os


def conv_py(a: list, b: list) -> list:
    """Full convolution of two nonempty coefficient lists."""
    la, lb = len(a), len(b)
    out = [0] * (la + lb - 1)
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


def conv_trunc_py(a: list, b: list, n: int) -> list:
    """First ``n`` coefficients of the convolution of ``a`` and ``b``."""
    la, lb = len(a), len(b)
    m = min(n, la + lb - 1)
    out = [0] * m
    for i in range(min(la, m)):
        x = a[i]
        if x == 0:
            continue
        top = min(lb, m - i)
        for j in range(top):
            y = b[j]
            if y == 0:
                continue
            out[i + j] = out[i + j] + x * y
    return out


def dot_py(a: list, b: list):
    """Sum of elementwise products; lists must have equal length."""
    acc = 0
    for i in range(len(a)):
        x = a[i]
        if x == 0:
            continue
        acc = acc + x * b[i]
    return acc


conv = conv_py
conv_trunc = conv_trunc_py
dot = dot_py
BACKEND = "python"

if not os.environ.get("BIEBERBACH_PURE"):
    try:
        from . import _speedups

        conv = _speedups.conv
        conv_trunc = _speedups.conv_trunc
        dot = _speedups.dot
        BACKEND = "c"
    except ImportError:
        pass


def backend() -> str:
    """Name of the active kernel backend ("c" or "python")."""
    return BACKEND
