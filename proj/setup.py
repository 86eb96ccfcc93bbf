import os
from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    env = os.environ.get("EIGEN3_INCLUDE_DIR")
    if env:
        return env
    for candidate in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(candidate):
            return candidate
    raise RuntimeError("Eigen headers not found; set EIGEN3_INCLUDE_DIR")


ext = Pybind11Extension(
    "latcell._latcell",
    sorted(glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
    extra_compile_args=["-pthread"],
    extra_link_args=["-pthread"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
