import logging

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """The compiled kernel is optional; the package falls back to Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            logging.warning("skipping compiled kernels: %s", exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            logging.warning("skipping %s: %s", ext.name, exc)


ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "steinerlab._kernels",
                ["src/steinerlab/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
