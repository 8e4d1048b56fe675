from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    # optional=True: a failed compile leaves the pure-Python kernels in charge
    ext_modules = cythonize(
        [Extension("ggrid._ckernels", ["src/ggrid/_ckernels.pyx"], optional=True)],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
