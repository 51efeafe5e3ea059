"""Builds the optional compiled kernel module.

The package is fully functional without it: bigen._backend falls back to the
pure-Python kernels when the extension is absent or fails to import.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "bigen._ckernels",
                ["src/bigen/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
