"""Exact distances between polytopes given as hull/sum circuits and the simplex."""
from .additivity import AdditivityWitness, SupportFace, additivity_gap, boundary_flat, find_witness, support_face
from .circuit import (
    Circuit,
    Point,
    Sum,
    Union,
    candidate_vertices,
    depth,
    hull,
    hull_union,
    minkowski_sum,
    parse_circuit,
    random_circuit,
    serialize_circuit,
    simplex_power_construction,
    support,
    zonotope,
)
from .distances import (
    DistanceReport,
    barycentric_range,
    de_inf_profile,
    distance_report,
    empty_corners,
    lambda_outer,
    negative_envelope,
    outer_simplex,
)
from .errors import *  # noqa: F401,F403
from .geometry import AffineMap, Homothet, Simplex, apply_affine, barycentric, parse_rational, reference_simplex
from .lp import LinearProgram, solve
from .polytope import (
    HPolytope,
    Polytope,
    VPolytope,
    h_to_v,
    inscribed_homothet,
    membership,
    outer_coefficient_general,
    v_to_h,
)
from .sphere import GapEstimate, estimate_gap, paper_simplex_circuit
from .suites import SuiteReport, TrialLog, replay, run_suite

__version__ = "0.1.0"
