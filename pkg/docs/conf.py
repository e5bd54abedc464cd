# Sphinx configuration for walkoff

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

project = 'walkoff'
copyright = '2021, the walkoff developers'
author = 'the walkoff developers'

version = '0.1'
release = '0.1.0'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
]

# Only needed at import time of the documented modules
autodoc_mock_imports = ['dask', 'distributed', 'tabulate', 'pytest']

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'walkoffdoc'

man_pages = [(master_doc, 'walkoff', 'walkoff Documentation', [author], 1)]
