"""Builds the optional Cython float kernels; the package works without them."""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    flags = [] if sys.platform == "win32" else ["-O3", "-ffp-contract=off"]
    ext_modules = cythonize(
        [Extension("chanup._kernels_c", ["src/chanup/_kernels_c.pyx"], extra_compile_args=flags)],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []


class OptionalBuildExt(build_ext):
    """Skip the extension on compiler failure; the pure-Python kernels take over."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - build environment
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: skipping {ext.name} ({exc})")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
