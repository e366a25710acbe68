"""Corpus preparation and evaluation toolkit for multilingual Indic NMT."""

__version__ = "0.1.0"
