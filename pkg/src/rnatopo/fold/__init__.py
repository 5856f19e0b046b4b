"""Genus-zero interaction folding."""

from .engine import (
    DEFAULT_LENGTH_CAP,
    DPState,
    InteractionStructure,
    LengthCap,
    Overflow,
    RequiresPartitionTables,
    boltzmann_sample,
    count_structures,
    fill_tables,
    mfe,
    partition_function,
    traceback,
)
from .grammar import Grammar, Nonterminal
from .probs import ProbabilityTables, pairing_probabilities

__all__ = [
    "DEFAULT_LENGTH_CAP",
    "DPState",
    "Grammar",
    "InteractionStructure",
    "LengthCap",
    "Nonterminal",
    "Overflow",
    "ProbabilityTables",
    "RequiresPartitionTables",
    "boltzmann_sample",
    "count_structures",
    "fill_tables",
    "mfe",
    "pairing_probabilities",
    "partition_function",
    "traceback",
]
