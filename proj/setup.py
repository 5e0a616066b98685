import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

here = os.path.abspath(os.path.dirname(__file__))

sources = [
    "src/instance.cpp",
    "src/stochastic.cpp",
    "src/milp.cpp",
    "src/simplex.cpp",
    "src/solver.cpp",
    "src/builders.cpp",
    "src/oracle.cpp",
    "src/harness.cpp",
    "src/pybind/module.cpp",
]

eigen = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "rrmilp._core",
    sources=sources,
    include_dirs=[os.path.join(here, "include"), os.path.join(here, "vendor"), eigen],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
