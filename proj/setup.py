import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        ext_fullpath = Path.cwd() / self.get_ext_fullpath(ext.name)
        cfg = "Debug" if int(os.environ.get("DEBUG", "0")) else "Release"
        cmake_args = [
            f"-DPython3_EXECUTABLE={sys.executable}",
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DQTRACK_BUILD_TESTS=OFF",
            "-DQTRACK_BUILD_CLI=OFF",
        ]
        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)
        subprocess.run(["cmake", ext.sourcedir, *cmake_args],
                       cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "qtrack_pymod"],
            cwd=build_temp, check=True)
        built = next((build_temp / "python" / "qtrack").glob("_core.*"))
        ext_fullpath.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, ext_fullpath)


setup(
    ext_modules=[CMakeExtension("qtrack._core")],
    cmdclass={"build_ext": CMakeBuild},
)
