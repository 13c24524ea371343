import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the compiled kernels when a toolchain is available.

    The package is fully functional without the extension (a numpy
    fallback is selected at import time), so any build failure here is
    reported and swallowed instead of aborting the install.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:
            sys.stderr.write(f"stablesep: skipping compiled kernels ({exc})\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            sys.stderr.write(f"stablesep: skipping {ext.name} ({exc})\n")


def extensions():
    if os.environ.get("STABLESEP_NO_EXT"):
        return []
    if not os.path.exists("src/stablesep/kernels/_cy.pyx"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "stablesep.kernels._cy",
        sources=["src/stablesep/kernels/_cy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
