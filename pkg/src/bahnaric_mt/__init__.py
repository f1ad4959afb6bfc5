"""Bahnaric-Vietnamese translation toolkit.

Corpus handling, dictionary-driven segmentation into anchors/chunks/literals,
co-occurrence word-sense disambiguation, low-resource data augmentation,
corpus BLEU, and an HTTP wire protocol for the neural chunk translator.
"""

__version__ = "0.1.0"
