# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('../hvclust/'))


# -- Project information -----------------------------------------------------

project = 'hvclust'
copyright = '2026, hvclust developers'
author = 'hvclust developers'


# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc',
			  'sphinx.ext.napoleon',
			  'sphinx.ext.autosectionlabel',
			  'sphinx.ext.mathjax',
]

autodoc_mock_imports = ['numpy', 'scipy', 'pandas', 'joblib', 'yaml', 'hvclust']
templates_path = ['_templates']

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
suppress_warnings = ["config.cache"]

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

autoclass_content = 'both'
