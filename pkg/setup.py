import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # pure-Python install: bibasis.kernels falls back to the numpy backend
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "bibasis.kernels._fast",
                ["src/bibasis/kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
