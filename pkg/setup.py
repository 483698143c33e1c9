"""Setup configuration for the automaton group Engel toolkit."""
from setuptools import setup, find_packages
from pathlib import Path

# Read README for long description
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

setup(
    name="automaton-group-engel",
    version="1.0.0",
    description="Canonical elements of automaton groups and deciders for the Engel property",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="Automaton Group Engel Team",
    python_requires=">=3.9",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "pydantic>=2.0.0",
        "rich>=13.0.0",
        "sympy>=1.12",
        "networkx>=3.0",
        "pyparsing>=3.0.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-mock>=3.10.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "agr=agr.main:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords=["automaton-groups", "mealy-machines", "grigorchuk-group", "engel", "group-theory"],
)
