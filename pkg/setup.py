"""Build script: compiles the hot-loop kernels when Cython is available.

The package works without the extension (a pure numpy fallback is selected
at import time), so the build degrades gracefully on machines without a
C toolchain.  Set ULTRAWEIGHTS_NO_EXT=1 to skip the extension build.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ULTRAWEIGHTS_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "ultraweights._kernels._hot",
                    ["src/ultraweights/_kernels/_hot.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
