from setuptools import setup
setup(name='qode',
      version='1.0',
      description='Query-count bounds for quantum linear ODE solvers',
      license = 'GPL-3',
      packages=['qode','qode.scenarios'],
      python_requires='>=3.9',
      install_requires=['numpy','scipy'],
      extras_require={'test':['pytest','sympy']},
      scripts=['bin/qode'],
      entry_points={'console_scripts':['qode=qode.cli:main']},
      )
# python3 setup.py install, or pip install -e .[test]
