"""Sandpile groups, extended sandpile groups and rectangle morphisms in exact arithmetic."""

from .dynamics import (
    enumerate_recurrent,
    group_add,
    group_inverse,
    identity_element,
    is_recurrent,
    recurrent_representative,
    stabilize,
)
from .graph import (
    Embedding,
    SinkedGraph,
    embed,
    from_edge_list,
    interior_laplacian,
    lattice_domain,
    path_graph,
    rectangle_graph,
    reduced_laplacian,
)
from .harmonic import (
    CircleVec,
    config_from_strict_harmonic,
    interior_cokernel,
    pairing,
    strict_harmonic_from_config,
)
from .linalg import GroupStructure, IntMatrix, cokernel_structure, det_exact, hnf, snf
from .rect import epi_apply, gamma, mono_apply

__version__ = "0.1.0"
