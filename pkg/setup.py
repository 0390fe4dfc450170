import warnings

from setuptools import Extension, setup

# The compiled enumeration kernel is an optional speedup; the package
# falls back to a vectorized numpy implementation when it is missing.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "belltopo._ising_kernel",
                ["src/belltopo/_ising_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    warnings.warn("Cython not available, building without the compiled enumeration kernel")
    extensions = []

setup(ext_modules=extensions)
