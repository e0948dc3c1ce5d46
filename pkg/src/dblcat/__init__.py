"""Finite double categories: constructions, nerves, categorification and model-structure predicates."""

__version__ = "0.1.0"
