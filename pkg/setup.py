from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the numpy fallback kernel is used instead
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("circuit_fsm._explore", ["src/circuit_fsm/_explore.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
