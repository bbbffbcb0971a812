"""Interval multidimensional scaling of ranking distance tables."""

from .embedding import MdsEmbedding, classical_scaling, embed, export_embedding

__all__ = ["MdsEmbedding", "classical_scaling", "embed", "export_embedding"]
