"""Build script: compiles the optional convolution speedup extension.

The package is pure Python; `bieberbach._speedups` is an optional Cython
module picked up at import time. If Cython or a C compiler is missing the
install still succeeds and the pure-Python kernels are used.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("bieberbach._speedups", ["src/bieberbach/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
