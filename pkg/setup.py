"""Builds the optional compiled rate kernel.

If Cython or a C compiler is unavailable the build falls back to the pure
Python kernel; the package works either way.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/relayrates/_chainkernel.pyx"],
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except ImportError:
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
