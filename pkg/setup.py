"""Build script: the Cython kernel extension is optional.

Without a working compiler the package still installs and runs on the
pure-Python kernels.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ORTHRANGE_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "orthrange._ckernels",
                    ["src/orthrange/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
