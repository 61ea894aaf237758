from setuptools import setup, find_packages

long_description = """

# Fair Alloc

Online fair allocation under Hölder-mean welfare: fluid and re-solving policies, and the regret benchmarks to compare them.

"""

setup(
   name='fair_alloc',
   version='0.1.0',
   description='Fair Alloc',
   packages=[package for package in find_packages() if package.startswith("fair_alloc")],
   long_description=long_description,
   install_requires=['cloudpickle', 'numba', 'numpy', 'tqdm', 'wandb'],
   extras_require={'tests': ['pytest', 'scipy']},
   entry_points={'console_scripts': ['fairalloc=fair_alloc.cli:main']},
)
