"""Build shim: compiles the optional Cython kernel when possible.

The package is fully functional without the extension (a pure-Python
fallback with the same interface is selected at import time), so any
build failure here downgrades to a plain install instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "fermilie._kernel",
                ["src/fermilie/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

try:
    setup(ext_modules=ext_modules)
except Exception:
    # Retry without the extension so a missing compiler cannot block install.
    setup(ext_modules=[])
