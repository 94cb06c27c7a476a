"""Build script: compiles the optional normal-ordering kernel.

The package is pure Python except for one hot loop (the normal-ordered
Weyl-algebra product).  If Cython or a C compiler is unavailable the
extension is skipped and the pure-Python kernel is used at import time.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("dstlab._weylkernel", ["src/dstlab/_weylkernel.pyx"],
                   optional=True)],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
