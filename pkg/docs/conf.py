# -*- coding: utf-8 -*-
#
# hybtrot documentation build configuration file.

import sys, os

# The package is imported from the source tree by autodoc.
sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx_rtd_theme',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'hybtrot'
copyright = u'2026 the hybtrot authors'

version = '0.1'
release = '0.1.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
htmlhelp_basename = 'hybtrotdoc'

latex_elements = {
}

latex_documents = [
  ('index', 'hybtrot.tex', u'hybtrot Documentation',
   u'the hybtrot authors', 'manual'),
]

man_pages = [
    ('index', 'hybtrot', u'hybtrot Documentation',
     [u'the hybtrot authors'], 1)
]

texinfo_documents = [
  ('index', 'hybtrot', u'hybtrot Documentation',
   u'the hybtrot authors', 'hybtrot',
   'Simulator of hybrid deterministic/random Trotter schemes.',
   'Miscellaneous'),
]

autoclass_content = 'both'
