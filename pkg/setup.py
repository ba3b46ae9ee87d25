import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "homricci._kernels._core",
                ["src/homricci/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython: install without the compiled core, the package falls back
    # to the pure-Python kernels at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
