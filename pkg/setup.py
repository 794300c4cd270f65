"""Build hook for the optional compiled kernel extension.

If Cython or a C toolchain is unavailable the build proceeds without the
extension; the package then falls back to the numpy kernels at import.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/seco/_kernels_cy.pyx",
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [np.get_include()]
except ImportError:
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
