"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin of every
kernel ships in selfsearch._kernels_py); set SELFSEARCH_NO_EXT=1 to skip
compilation entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if we can, fall back to pure Python if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain
            print(f"warning: skipping C extension build ({exc}); "
                  "pure-Python kernels will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "pure-Python kernels will be used")


ext_modules = []
cmdclass = {}
if os.environ.get("SELFSEARCH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("selfsearch._kernels", ["src/selfsearch/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        print("warning: Cython not available; pure-Python kernels will be used")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
