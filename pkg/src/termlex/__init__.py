"""Terminological knowledge base and lexical-semantics toolkit for verb classes."""

__version__ = "0.1.0"
