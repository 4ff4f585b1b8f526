"""Example-based feedback for C compilation errors."""

from ._tegcer import (
    CapError,
    FormatError,
    Model,
    TegcerError,
    abstract_line,
    build_dataset,
    diff_repair,
    feature_tokens,
    generalize,
    synthesize_corpus,
    tokenize,
)

__all__ = [
    "CapError",
    "FormatError",
    "Model",
    "TegcerError",
    "abstract_line",
    "build_dataset",
    "diff_repair",
    "feature_tokens",
    "generalize",
    "synthesize_corpus",
    "tokenize",
]
