"""Marked metric graphs of genus 1 and the moduli of marked unit cycles."""

from .errors import DomainError, GeneratorError
from .metric_graph import (
    Edge,
    MetricGraph,
    Vertex,
    Violation,
    components,
    contract_edge,
    genus,
    graph_from_json,
    graph_to_json,
    is_connected,
    parse_rational,
    total_length,
    valency,
    validate,
)
from .moduli_space import (
    BOUNDARY,
    BOUNDARY_BAND,
    HALF,
    INSIDE,
    OUTSIDE,
    PAPER,
    SYMMETRIC,
    TOLERANCE,
    CyclePoint,
    MarkedCycle,
    ModuliPoint,
    NeighborhoodVerdict,
    additivity_witness_check,
    as_point,
    canonical_form,
    denormalize,
    eps_close,
    in_neighborhood,
    is_in_Y,
    is_tropical_point,
    iso_equal,
    marked_cycle,
    normalize,
    reflect,
    sample_neighbor,
    to_tropical_point,
    x_coord,
)
from .retraction import (
    conjectured_retract,
    find_bridges,
    is_tropically_stable,
    shrink_bridges,
)
from .scanning import (
    CertificateReport,
    continuity_certificate,
    homotopy_frame,
    lemma_step1_check,
    lemma_step2_check,
    non_strongness_witness,
    scan,
    scan_abscissa,
    scan_cycle,
)

__version__ = "0.1.0"
