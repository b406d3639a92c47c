"""Build script for the optional compiled scan kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); the Cython build is attempted opportunistically so that
environments without a compiler still get a working install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "paperscreen.matcher._ackernel",
                ["src/paperscreen/matcher/_ackernel.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
