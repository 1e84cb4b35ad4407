"""Constructive embedding of bounded-degree graphs into super-regular blow-ups."""

from .embedder import EmbedConfig, EmbeddingReport, compute_cascade, embed, verify_embedding
from .generators import HostRecipe, blowup, pattern_cycles, pattern_random_bounded, random_host
from .graph import ClusterGraph, PartitionedHost, Pattern, SimpleGraph

__version__ = "0.1.0"

__all__ = [
    "ClusterGraph",
    "PartitionedHost",
    "Pattern",
    "SimpleGraph",
    "HostRecipe",
    "blowup",
    "random_host",
    "pattern_cycles",
    "pattern_random_bounded",
    "EmbedConfig",
    "EmbeddingReport",
    "compute_cascade",
    "embed",
    "verify_embedding",
]
