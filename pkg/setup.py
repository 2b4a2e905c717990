"""Builds the optional compiled row-reduction kernel; the package works without it."""

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(["src/dgqs/_rref.pyx"], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
