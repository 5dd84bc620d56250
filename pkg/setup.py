import os

from setuptools import setup

# The compiled row-reduction kernel is optional: without Cython (or with
# OCAT_NO_EXT=1) the package installs with the pure-Python kernel only.
ext_modules = []
if os.environ.get("OCAT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/ocat/_rref_c.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
