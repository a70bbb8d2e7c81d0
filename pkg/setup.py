import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QUDIT_ARITH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        import numpy as np

        ext_modules = cythonize(
            [Extension("qudit_arith._kernels", ["src/qudit_arith/_kernels.pyx"],
                       include_dirs=[np.get_include()], extra_compile_args=["-O3", "-fcx-limited-range"])],
            language_level=3,
        )
    except ImportError:
        # no Cython available: the package falls back to the NumPy kernels
        ext_modules = []

setup(ext_modules=ext_modules)
