"""Fractal squares: connectivity, topology type, congruence and Lipschitz witnesses."""
from ._kernels import BACKEND
from .automaton import hata_connected, surviving_offsets
from .congruence import burnside_count_dihedral, canonical_form, enumerate_classes
from .grid import CellCapExceeded, DigitSet, approximation, parse_label_matrix
from .paths import classify_type, construct_td_digitset
from .topology import (
    delete_cylinder_components,
    first_cycle_level,
    fingerprint,
    full_edge_tree,
)
from .witness import equivalence_classes, search_witness, verify_witness

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CellCapExceeded",
    "DigitSet",
    "approximation",
    "burnside_count_dihedral",
    "canonical_form",
    "classify_type",
    "construct_td_digitset",
    "delete_cylinder_components",
    "enumerate_classes",
    "equivalence_classes",
    "fingerprint",
    "first_cycle_level",
    "full_edge_tree",
    "hata_connected",
    "parse_label_matrix",
    "search_witness",
    "surviving_offsets",
    "verify_witness",
]
