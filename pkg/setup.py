import os
import sys

from setuptools import Extension, setup

# The compiled core is optional: a failed build leaves the pure-Python kernels in charge.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    if sys.platform == "win32":
        omp_compile, omp_link = ["/openmp"], []
    elif os.environ.get("WLPA_NO_OPENMP"):
        omp_compile, omp_link = [], []
    else:
        omp_compile, omp_link = ["-fopenmp"], ["-fopenmp"]
    ext_modules = cythonize(
        [
            Extension(
                "wlpa._kernels",
                ["src/wlpa/_kernels.pyx"],
                extra_compile_args=["-O3", *omp_compile],
                extra_link_args=omp_link,
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
