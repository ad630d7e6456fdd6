"""Succinct chordal graphs of bounded vertex leafage."""

from __future__ import annotations

from .decompose import ModelError, TreeModel, format_model, parse_model
from .encoded import EncodedGraph, build, build_full
from .oracle import gen_model, oracle_graph

__all__ = [
    "EncodedGraph",
    "ModelError",
    "TreeModel",
    "build",
    "build_full",
    "format_model",
    "gen_model",
    "oracle_graph",
    "parse_model",
]
