"""CMake-backed build of the cfair._core extension.

setuptools drives a regular CMake configure/build of the C++ library and
points the extension output at the package directory, so `pip install -e .
--no-build-isolation` and plain wheel builds both work.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        extdir = ext_path.parent
        extdir.mkdir(parents=True, exist_ok=True)

        build_temp = Path(self.build_temp).resolve() / ext.name.split(".")[-1]
        build_temp.mkdir(parents=True, exist_ok=True)

        cmake_args = [
            "-DCMAKE_BUILD_TYPE=Release",
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={extdir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DCFAIR_BUILD_TESTS=OFF",
            "-DCFAIR_BUILD_CLI=OFF",
            "-DCFAIR_BUILD_PYTHON=ON",
        ]
        try:
            import pybind11

            cmake_args.append(f"-Dpybind11_DIR={pybind11.get_cmake_dir()}")
        except ImportError:
            pass  # fall back to a system-wide pybind11 config

        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", f"-j{os.cpu_count() or 1}"],
            cwd=build_temp,
            check=True,
        )

        built = sorted(extdir.glob("_core*.so")) + sorted(build_temp.glob("_core*.so"))
        if not built:
            raise RuntimeError("cmake did not produce the _core extension module")
        if built[0] != ext_path:
            self.copy_file(str(built[0]), str(ext_path))


setup(
    ext_modules=[CMakeExtension("cfair._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
