from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cotrain.classifiers.kernels._split_cy",
                ["src/cotrain/classifiers/kernels/_split_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: install with the pure-Python kernel only.
    ext_modules = []

setup(ext_modules=ext_modules)
