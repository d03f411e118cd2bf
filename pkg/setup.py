"""Build script. The only non-declarative part is the optional Cython extension.

The compiled kernels in semimat._ffcore._ckernels are an accelerator, not a
requirement: if Cython or a C compiler is missing, the build warns and the
package falls back to the pure-Python kernels at import time.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing toolchain
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    def _skip(self, exc):
        print("WARNING: building semimat._ffcore._ckernels failed (%s); "
              "the pure-Python kernels will be used instead" % (exc,))


ext_modules = []
if not os.environ.get("SEMIMAT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("semimat._ffcore._ckernels",
                       ["src/semimat/_ffcore/_ckernels.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        print("WARNING: Cython not available; skipping compiled kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
