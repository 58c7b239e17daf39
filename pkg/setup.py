from setuptools import setup

# scipy >= 1.8 for BSpline.design_matrix and the highs-ds linprog method

setup(
    name='near_best_spline_QI',
    packages=['spline_QI'],
    install_requires=['numpy', 'scipy>=1.8', 'pandas', 'dill'],
    extras_require={
        'plots': ['matplotlib==3.5.1', 'seaborn'],
        'tests': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['spline-qi=spline_QI.cli:main'],
    },
    version='0.1.0',
    license='MIT',
    description='Discrete and integral spline quasi-interpolants with '
                'near-best l1 coefficient functionals',
)
