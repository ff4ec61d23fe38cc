# -*- coding: utf-8 -*-
#
# resilient_dgd documentation build configuration file

import sys
import os

# make package importable by autodoc
sys.path.insert(0, os.path.abspath('../..'))

import resilient_dgd.version  # noqa

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Resilient DGD'
copyright = u'2020-2021, resilient-dgd authors'

version = resilient_dgd.version.version
release = resilient_dgd.version.version

exclude_patterns = []
pygments_style = 'sphinx'

# members in source order
autodoc_member_order = 'bysource'

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'resilient_dgddoc'

man_pages = [
    ('index', 'resilient_dgd', u'resilient_dgd Documentation',
     [u'resilient-dgd authors'], 1)
]
