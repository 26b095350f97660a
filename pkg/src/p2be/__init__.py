"""Partitioned 2-page book embedding: decision, witness spine, generator and oracle."""
from __future__ import annotations

from .engine import REASONS, InternalInconsistency, Negative
from .graph import BLUE, RED, ColoredGraph
from .pipeline import BookEmbedding, decide, test, test_biconnected

__version__ = "0.1.0"

__all__ = [
    "BLUE",
    "RED",
    "REASONS",
    "BookEmbedding",
    "ColoredGraph",
    "InternalInconsistency",
    "Negative",
    "decide",
    "test",
    "test_biconnected",
]
