# SPDX-License-Identifier: MIT
# Compiled-extension build; package metadata lives in pyproject.toml.
from glob import glob

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("CYCRES_NUM_BUILD_JOBS", default=4).install()

core_sources = sorted(set(glob("src/*.cpp")) - {"src/cli_main.cpp"})

setup(
    ext_modules=[
        Pybind11Extension(
            "cycres._core",
            ["python/bindings.cpp", *core_sources],
            include_dirs=["include", "vendor"],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
