import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CWF_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("cwf._kernels", ["src/cwf/_kernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
