try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup
import builtins

# Set a global so that the main skdem __init__ can detect that it is
# being loaded by the setup routine and skip its heavy imports.
builtins.__SKDEM_SETUP__ = True

import skdem

VERSION = skdem.__version__

CLASSIFIERS = ['Intended Audience :: Science/Research',
               'Intended Audience :: Developers',
               'License :: OSI Approved :: BSD License',
               'Programming Language :: Python',
               'Topic :: Scientific/Engineering',
               'Topic :: Scientific/Engineering :: Electronic Design '
               'Automation (EDA)',
               'Operating System :: POSIX',
               'Operating System :: Unix',
               'Operating System :: MacOS',
               'Programming Language :: Python :: 3.8',
               'Programming Language :: Python :: 3.9',
               'Programming Language :: Python :: 3.10']


setup(name='scikit-dem',
      version=VERSION,
      description='Behavioral simulation of multibit sigma-delta DACs with '
                  'dynamic element matching.',
      long_description=open('README.rst').read(),
      license='BSD 3-clause',
      author='The scikit-dem contributors',
      classifiers=CLASSIFIERS,
      packages=['skdem', 'skdem.selection'],
      package_data={'skdem': ['presets/*.yaml']},
      python_requires='>=3.8',
      install_requires=['joblib>=0.11', 'pyaml>=16.9', 'PyYAML>=5.1',
                        'numpy>=1.17', 'scipy>=1.2',
                        'scikit-learn>=0.20.0'],
      extras_require={
        'plots':  ["matplotlib>=3.0.0"]
        },
      entry_points={
        'console_scripts': ['skdem = skdem.cli:main']
        }
      )
