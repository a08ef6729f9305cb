"""Builds the optional Cython kernels; the package falls back to pure Python without them."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ORDFIX_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension
        import numpy as np

        ext_modules = cythonize(
            [
                Extension(
                    "ordfix._ckernels",
                    ["src/ordfix/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
