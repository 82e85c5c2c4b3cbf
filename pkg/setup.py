from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install still works: the package falls back to
    # shiftchaos._kernels_py at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("shiftchaos._kernels", ["src/shiftchaos/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
