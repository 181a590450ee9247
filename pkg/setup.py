"""Build script: compiles the optional native kernels.

The package works without the extension (a numpy fallback is selected at
import time), so the extension is marked optional and any build failure is
non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "spotvol._kernels._native",
        ["src/spotvol/_kernels/_native.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level=3)
except ImportError:
    pass

setup(ext_modules=ext_modules)
