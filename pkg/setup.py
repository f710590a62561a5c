from setuptools import setup

setup(name = 'hvclust',
	version = '0.1.0',
	packages = ['hvclust'],
	package_data = {'hvclust': ['schemas/*.json']},
	install_requires = ['numpy', 'scipy', 'pandas', 'pyyaml', 'joblib'],
	extras_require = {'test': ['pytest', 'hypothesis', 'mpmath', 'networkx', 'jsonschema']},
	entry_points = {'console_scripts': ['hvclust = hvclust.CommandLine:main']},
	zip_safe = False)
