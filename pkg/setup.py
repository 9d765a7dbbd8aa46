import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels fall back to numpy
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("MASP_NO_EXT"):
    extensions = [
        Extension(
            "maspitch._kernels",
            ["src/maspitch/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3", "-fopenmp"],
            extra_link_args=["-fopenmp"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
    ]
    ext_modules = cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
