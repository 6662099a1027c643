"""Build script for the compiled gram-assembly engine.

The extension is optional: if Cython or a C compiler is unavailable the
package installs anyway and falls back to the numpy engine at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "bartr.kernels._engine_c",
                ["src/bartr/kernels/_engine_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
