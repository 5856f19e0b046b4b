"""Topology and genus-zero folding of RNA-RNA interaction structures."""

from .diagram import (
    ArcKind,
    Diagram,
    SequencePair,
    build_diagram,
    describe_structure,
    parse_structure,
    render_structure,
)
from .shadows import gamma, irreducible_shadows, shadow
from .topology import boundary_components, genus, glue_alpha, product_bullet

__all__ = [
    "ArcKind",
    "Diagram",
    "SequencePair",
    "boundary_components",
    "build_diagram",
    "describe_structure",
    "gamma",
    "genus",
    "glue_alpha",
    "irreducible_shadows",
    "parse_structure",
    "product_bullet",
    "render_structure",
    "shadow",
]
