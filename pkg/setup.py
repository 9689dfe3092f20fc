"""Build script: compiles the optional peak-search extension.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed compile downgrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def maybe_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        print(f"padpkit: skipping compiled kernels ({exc})", file=sys.stderr)
        return []
    ext = Extension(
        "padpkit.kernels._core",
        ["src/padpkit/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


class optional_build_ext(build_ext):
    """Build extensions but never fail the whole install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"padpkit: compiled kernels unavailable: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"padpkit: failed to build {ext.name}: {exc}", file=sys.stderr)


setup(ext_modules=maybe_extensions(), cmdclass={"build_ext": optional_build_ext})
