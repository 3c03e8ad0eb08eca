#!/usr/bin/env python3
#
# xcubeprep documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys

# The package lives one directory up.
sys.path.insert(0, os.path.abspath(".."))
import xcubeprep

# -- General configuration -----------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.coverage",
    "sphinx.ext.mathjax",
]

templates_path = ["_templates"]

source_suffix = ".rst"

master_doc = "index"

# General information about the project.
project = "xcubeprep"
copyright = "2025, xcubeprep developers"

# The short X.Y version.
version = xcubeprep.__version__
# The full version, including alpha/beta/rc tags.
release = xcubeprep.__version__

exclude_patterns = ["_build"]

pygments_style = "sphinx"

# Document members in source order so the pipeline reads top to bottom.
autodoc_member_order = "bysource"

# -- Options for HTML output ---------------------------------------------

html_theme = "sphinxdoc"

html_static_path = []

htmlhelp_basename = "xcubeprepdoc"

# -- Options for LaTeX output --------------------------------------------

latex_documents = [
    ("index", "xcubeprep.tex", "xcubeprep Documentation", "xcubeprep developers", "manual"),
]

# -- Options for manual page output --------------------------------------

man_pages = [("index", "xcubeprep", "xcubeprep Documentation", ["xcubeprep developers"], 1)]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "networkx": ("https://networkx.org/documentation/stable/", None),
}
