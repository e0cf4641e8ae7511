#!/usr/bin/env python3

from setuptools import setup, find_packages

deps = [
	'numpy (>=1.17)',
	'scipy (>=1.4)',
]

tests_require = [
	'pytype',
	'parameterized',
]

setup(
	name="hybtrot",
	version="0.1.0",
	description="Classical simulator of hybrid deterministic/random Trotter schemes.",
	author="the hybtrot authors",
	license="LGPL3+",
	install_requires=['numpy>=1.17', 'scipy>=1.4'],
	requires=deps,
	tests_require=tests_require,
	extras_require={'test': tests_require},
	packages=find_packages(exclude=['tests', 'tests.*']),
	python_requires='>=3.8',

	entry_points={
		'console_scripts': [
			'hybtrot = hybtrot.tools.hybtrot_cli:main',
		]
	},

	classifiers=[
		'License :: OSI Approved :: GNU Lesser General Public License v3 or later (LGPLv3+)',
		'Programming Language :: Python :: 3',
		'Topic :: Scientific/Engineering :: Physics',
	],
)
