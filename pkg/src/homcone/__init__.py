"""Homogeneous convex cones represented as block spectrahedral cones.

A cone is described by an :class:`IshiFrame`: block sizes plus one subspace
of off-diagonal blocks per pair of indices. The package checks the closure
axioms that make the cone homogeneous, factors points through the
triangular group, names faces and extreme rays, bounds Carathéodory numbers
through dimension conditions on the subspaces, and classifies sparse
patterns through homogeneous chordal graphs.
"""

from .caratheodory import (
    CaratheodoryBounds,
    ConditionReport,
    Decomposition,
    RayTerm,
    caratheodory_bounds,
    decompose,
    decompose_dual_orbit,
    dual_condition,
    dual_witness,
    find_witness,
    indecomposable_components,
    is_selfdual,
    operator_condition,
    primal_condition,
    primal_witness,
    witness_gap,
)
from .dense import DEFAULT_TOL, Tolerance, cholesky_type, frobenius_inner, is_positive_definite, matrix_rank
from .exceptions import *  # noqa: F401,F403
from .families import (
    complexify,
    direct_sum,
    full_frame,
    lorentz_frame,
    named_frames,
    primal_witness_frame,
    random_homogeneous_frame,
    rotate_blocks,
    sparse_frame,
    tensor_identity,
    vinberg_dual_frame,
    vinberg_frame,
)
from .frame import (
    AxiomReport,
    BlockOperator,
    BlockStructure,
    IshiFrame,
    Subspace,
    left_mult,
    make_frame,
    operator_identity_residuals,
    project_onto_V,
    right_mult,
    verify_axioms,
)
from .geometry import (
    FaceDescriptor,
    Membership,
    dual_orbit_factor,
    extreme_ray,
    face_span_projector,
    group_act,
    in_cone,
    maximal_chain_rank,
    minimal_face,
    orbit_factor,
    random_group_element,
    random_interior_point,
)
from .graphs import (
    PatternGraph,
    classify_sparse,
    enumerate_connected_homogeneous,
    frame_from_graph,
    is_chordal,
    is_homogeneous_chordal,
    rank4_catalog,
)

__version__ = "0.1.0"
