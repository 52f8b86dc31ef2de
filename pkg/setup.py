"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension: when
``pzfsim._kernels._core`` is missing, the pure-numpy kernels are selected at
import time.  Set ``PZFSIM_NO_EXTENSION=1`` to skip the build explicitly
(for example to benchmark the fallback).
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the install because the extension would not compile."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernels skipped ({exc}); "
                  "the pure-python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "the pure-python fallback will be used")


def extensions():
    if os.environ.get("PZFSIM_NO_EXTENSION"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        print(f"warning: compiled kernels not built ({exc})")
        return []
    ext = Extension(
        "pzfsim._kernels._core",
        ["src/pzfsim/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
