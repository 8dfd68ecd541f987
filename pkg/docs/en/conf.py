# Configuration file for the Sphinx documentation builder.

import os
import sys

sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx_autodoc_typehints'
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'flowdyn'
copyright = '2020, flowdyn contributors'
author = 'flowdyn contributors'

import flowdyn

version = flowdyn.__version__.split("-")[0]
release = flowdyn.__version__

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'collapse_navigation': False,
    'style_external_links': False
}
html_static_path = []
htmlhelp_basename = 'flowdyn-doc'

latex_documents = [
    (master_doc, 'flowdyn.tex', 'flowdyn Documentation',
     author, 'manual'),
]

man_pages = [
    (master_doc, 'flowdyn', 'flowdyn Documentation',
     [author], 1)
]
