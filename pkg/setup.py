"""Build hook for the optional compiled membership kernel.

The package is pure Python except for upstack/_kernel/membership_cy.pyx,
a Cython twin of membership_py.py. If Cython (or a C compiler) is missing
the extension is skipped and the import-time fallback picks the pure
backend, so installation never fails on that account.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/upstack/_kernel/membership_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
