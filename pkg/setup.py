import setuptools

with open("README.md", 'r') as fh:
    long_description = fh.read()

setuptools.setup(
        name="sharpcal",
        version="0.1.0",
        description="calibration and sharpness diagnostics for predictive \
distributions",
        packages=setuptools.find_packages(exclude=["tests", "examples*"]),
        python_requires=">=3.8",
        install_requires=[
            "numpy>=1.20",
            "pandas>=1.1",
            "scipy>=1.6",
        ],
        extras_require={
            "test": ["pytest>=7"],
        },
        entry_points={
            "console_scripts": ["sharpcal=sharpcal.cli:main"],
        },
        classifiers=[
            "Development Status :: 2 - Pre-Alpha",
            "Programming Language :: Python :: 3 :: Only",
            "Operating System :: OS Independent"
        ],
        long_description=long_description,
        long_description_content_type="text/markdown",
)
