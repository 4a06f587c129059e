"""Build script: compiles the optional link-cut tree core.

The package is fully functional without the extension (a pure-Python twin
is selected at import time), so any build failure here downgrades to a
pure-Python install instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gradmorph/_lc_core.pyx"],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - environment dependent
    print(f"gradmorph: skipping compiled core ({exc}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
