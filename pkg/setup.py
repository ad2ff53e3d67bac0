"""Build script: compiles the optional Cython reduction kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "tropdiv._kernel._fastreduce",
                ["src/tropdiv/_kernel/_fastreduce.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    import sys

    print(f"tropdiv: building without compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
