"""Build the optional Cython kernels.

The package works without them: ``seqemu.kernels`` falls back to the
pure-Python implementations when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SEQEMU_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "seqemu._ckernels",
                    ["src/seqemu/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
