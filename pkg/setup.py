from os import path
from setuptools import setup, find_packages
from setuptools import Extension
from Cython.Build import cythonize

# Extension definition
EXTENSIONS = [
    Extension(
        "zcaq._bitcorr",
        ["src/zcaq/_bitcorr.pyx"],
        extra_compile_args=["-O3"],
        # pure numpy kernels are used when the build fails
        optional=True,
    )
]


HERE = path.abspath(path.dirname(__file__))
with open(path.join(HERE, "README.rst"), encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="zcaq-python",
    description="Two-dimensional Z-complementary array quads: construction, verification, PMEPR and seed search",
    long_description=long_description,
    long_description_content_type="text/x-rst",
    use_scm_version={"fallback_version": "0.1.0"},
    packages=find_packages("src"),
    package_data={"*": ["py.typed", "*.pyi"], "zcaq": ["data/*.json"]},
    package_dir={"": "src"},
    zip_safe=False,
    python_requires=">=3.8",
    install_requires=["numpy>=1.22", "scipy>=1.8"],
    ext_modules=cythonize(EXTENSIONS, language_level=3, annotate=False, compiler_directives={"embedsignature": True}),
    entry_points={
        "console_scripts": [
            "zcaq = zcaq.__main__:main",
        ]
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Communications",
    ],
)
