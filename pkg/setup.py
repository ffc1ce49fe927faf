"""Build the optional compiled search kernel.

The package is fully functional without it (a pure-Python kernel is selected
at import time); compilation failures therefore only emit a warning.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping compiled kernel: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")


try:
    from Cython.Build import cythonize
    extensions = cythonize(
        [Extension("nzflow._mod3_cy", ["src/nzflow/_mod3_cy.pyx"])],
        language_level=3,
    )
except ImportError:  # pragma: no cover - Cython not installed
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
