"""
HTML parsing, on-page extraction and the markup/CSS linter.
"""

from .parser import Document, parse_html
from .onpage import extract_onpage
from .lint import lint_markup, lint_css

__all__ = [
    'Document',
    'parse_html',
    'extract_onpage',
    'lint_markup',
    'lint_css'
]
