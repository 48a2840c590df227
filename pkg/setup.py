#!/usr/bin/env python3
import pathlib

from setuptools import find_packages, setup

HERE = pathlib.Path(__file__).parent.resolve()

README = (HERE / "README.md").read_text()

tests_require = [
    "deepdiff",
    "pre-commit",
    "pytest",
    "pytest-benchmark",
    "ruff",
    "sphinx_click",
]

extras_require = {
    "test": tests_require,
}

setup(
    name="anthroscan",
    description="Measure implicit anthropomorphism in text corpora with masked language models",
    long_description=README,
    long_description_content_type="text/markdown",
    use_scm_version=True,
    setup_requires=["setuptools_scm"],
    python_requires=">=3.10",
    license="Apache Software License 2.0",
    packages=find_packages(exclude=("integration_tests",)),
    classifiers=[
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
        "Operating System :: OS Independent",
        "Topic :: Text Processing :: Linguistic",
    ],
    include_package_data=True,
    package_data={"anthroscan": ["data/lexicons/*.txt", "data/*.toml", "data/examples/*"]},
    install_requires=[
        "cachetools",
        # Tests fail with "ValueError: I/O operation on closed file" with Click
        # 8.2.0 and later.
        "click<8.2.0",
        "conllu",
        "flask",
        "nltk",
        "numpy",
        "orjson>=3",
        "python-dateutil",
        "requests",
        "scipy",
        "structlog>=20.2.0",
        "tomli; python_version < '3.11'",
        "typing_extensions",
        "werkzeug",
    ],
    tests_require=tests_require,
    extras_require=extras_require,
    entry_points={
        "console_scripts": [
            "anthroscan = anthroscan.cli:cli",
        ]
    },
)
