from setuptools import setup, Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "anisorobin._kernels_c",
                ["src/anisorobin/_kernels_c.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython available: install pure-Python only, the package falls back
    # to anisorobin._kernels_py at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
