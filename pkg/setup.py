"""Build script. The compiled interpreter core is optional: if Cython or a C
compiler is unavailable the install proceeds and the package falls back to the
pure-Python engine at import time."""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled engine skipped ({exc}); "
                  "pure-Python fallback will be used", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used", file=sys.stderr)


def extensions():
    if not os.path.exists("src/perfloc/runtime/_engine.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension
    return cythonize(
        [Extension(
            "perfloc.runtime._engine",
            ["src/perfloc/runtime/_engine.pyx"],
            extra_compile_args=["-O2"],
        )],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
