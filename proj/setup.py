"""CMake-driven build of the swpm._swpm extension module.

The C++ core and the pybind11 bindings are built by the project's regular
CMake tree (with tests disabled); the resulting extension is dropped into
the swpm package directory.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str) -> None:
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_dir = ext_path.parent
        ext_dir.mkdir(parents=True, exist_ok=True)
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        config = "Debug" if self.debug else "Release"
        source_dir = Path(__file__).resolve().parent
        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={config}",
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={ext_dir}",
            f"-DPython_EXECUTABLE={sys.executable}",
            "-DSWPM_BUILD_PYTHON=ON",
            "-DSWPM_BUILD_TESTS=OFF",
        ]
        try:
            import pybind11

            cmake_args.append(f"-Dpybind11_DIR={pybind11.get_cmake_dir()}")
        except ImportError:
            pass  # fall back to a system-wide pybind11 CMake config

        env = os.environ.copy()
        subprocess.run(
            ["cmake", str(source_dir), *cmake_args], cwd=build_dir, env=env,
            check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_swpm",
             "--config", config, "-j"],
            cwd=build_dir, env=env, check=True)


setup(
    ext_modules=[CMakeExtension("swpm._swpm")],
    cmdclass={"build_ext": CMakeBuild},
)
