"""
walkoff
Sacrifice bunting with the extra-inning ghost runner: event-file replay, IPW effect estimation,
synthetic oracles and a base-out Markov simulator
"""
from setuptools import find_packages, setup

short_description = __doc__.split("\n")

try:
    with open("README.md", "r") as handle:
        long_description = handle.read()
except OSError:
    long_description = "\n".join(short_description[2:])

setup(
    name='walkoff',
    description=short_description[1],
    long_description=long_description,
    long_description_content_type="text/markdown",
    version='0.1.0',
    license='BSD-3-Clause',
    packages=find_packages(),
    package_data={'walkoff': ["data/*.cfg"]},
    scripts=['./bin/walkoff'],
    install_requires=[
        'numpy', 'scipy', 'pandas>=1.5', 'scikit-learn>=1.0', 'tabulate', 'dask[distributed]'
    ],
    extras_require={'test': ['pytest', 'pytest-cov']},
    python_requires=">=3.8",
)
