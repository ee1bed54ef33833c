import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class OptionalBuildExt(build_ext):
    """Build the compiled geometry core if possible, fall back silently otherwise.

    The package is fully functional without the extension; harmlens.geometry
    selects the pure numpy implementation when the import fails.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled crossing core: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name}: {exc}")


ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [Extension("harmlens._crossings", ["src/harmlens/_crossings.pyx"])],
        language_level="3",
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
