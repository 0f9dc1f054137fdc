from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("pbflab.kernels._core", ["src/pbflab/kernels/_core.pyx"])],
        language_level="3",
    )
except ImportError:
    # Without Cython the package still installs; the pure-Python kernel
    # backend is selected at import time.
    extensions = []

setup(ext_modules=extensions)
