"""Job title similarity: bag-of-words, averaged word vectors, Word Mover's
Distance and paragraph vectors behind one kNN classifier."""

import logging

__version__ = '1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
