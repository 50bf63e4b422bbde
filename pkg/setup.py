from setuptools import setup, find_packages

setup(
    name="msgeo",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "msgeo.data": ["problems/*.toml", "schemas/*.json"],
    },
    install_requires=[
        "sympy>=1.12",
        "numpy>=1.26",
        "sqlalchemy>=2.0.27",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0.0",
            "pytest-mock>=3.0.0",
            "hypothesis>=6.90",
            "jsonschema>=4.20",
        ],
    },
    entry_points={
        "console_scripts": [
            "msgeo=msgeo.cli:run_cli",
        ],
    },
    description="Exact multisymplectic linear algebra and symbolic first-order field theory",
    keywords="multisymplectic, field theory, jet bundles, legendre transform, de donder",
    python_requires=">=3.11",
)
