"""Ends of infinite digraphs, analysed on finite truncations."""

from .core import (
    EndDescriptor,
    LevelledDigraph,
    Presentation,
    export,
    from_edges,
    frontier,
    import_digraph,
    reverse,
    same_structure,
    truncate,
)
from .counterexample_checks import verify_counterexample, verify_edge_counterexample
from .degrees import DegreeReport, combined_in_degree, delta_minus
from .ends import (
    consistent_frontier,
    dominates,
    dominating_set,
    equivalence_degree,
    in_degree_estimate,
    out_degree_estimate,
    star_comb,
)
from .errors import (
    ContradictionError,
    EndGraphError,
    InfeasibleError,
    InsufficientInputError,
    ParseError,
    PreconditionError,
    PresentationError,
    UnknownEndError,
    ValidationError,
)
from .families import FAMILIES, build_family
from .flow import PathSystem, SeparatorCertificate, max_disjoint_dipaths, min_edge_cut, min_vertex_separator
from .proofs import RayFamilyState, double_rays, extend_ray_family
from .sequences import ExhaustingSequence, graded_sequence, verify_exhausting

__version__ = "0.1.0"
