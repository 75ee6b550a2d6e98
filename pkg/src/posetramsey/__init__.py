"""Ramsey-type problems for Boolean lattices: embeddings, colorings and searches."""

__version__ = "0.1.0"

from .colorings import BLUE, RED, Coloring, complement_recolor, layered_coloring, lubell_mass, random_coloring
from .detect import count_mono_qn, find_boolean_algebra, find_mono_qn, find_poset_copy
from .embeddings import Embedding, GoodSequence, count_embeddings_exact, enumerate_embeddings
from .errors import InvalidInputError, PosetRamseyError, ResourceLimitError, ValidationFailure
from .lattice import Poset, UpSet, count_antichains, dim2, enumerate_upsets
from .ramsey import arrowing, multicolor_ramsey, ramsey_number, witness_search

__all__ = [
    "BLUE", "RED", "Coloring", "Embedding", "GoodSequence", "InvalidInputError", "Poset",
    "PosetRamseyError", "ResourceLimitError", "UpSet", "ValidationFailure", "arrowing",
    "complement_recolor", "count_antichains", "count_embeddings_exact", "count_mono_qn", "dim2",
    "enumerate_embeddings", "enumerate_upsets", "find_boolean_algebra", "find_mono_qn",
    "find_poset_copy", "layered_coloring", "lubell_mass", "multicolor_ramsey", "random_coloring",
    "ramsey_number", "witness_search",
]
