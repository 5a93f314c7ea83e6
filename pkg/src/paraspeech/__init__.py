"""Paragraph-aware end-to-end speech synthesis toolkit.

Sentence-wise training with paragraph-level linguistic and prosodic
context, whole-paragraph synthesis, plus the corpus analysis and
objective evaluation tooling that goes with it.
"""

__version__ = "0.1.0"
