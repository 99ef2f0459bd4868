"""Randomized multi-block coordinate descent for separable convex problems
coupled by a zero-sum constraint over a network, with probability design,
rate certificates, and projection onto intersections of convex sets."""

from .graphs import Network, PathSet, make_topology, enumerate_paths, is_connected
from .objectives import (
    SeparableObjective,
    QuadLogistic,
    QuadLogisticParams,
    Quadratic,
    CallableObjective,
    make_quad_logistic,
    normalize_constraint,
)
from .probability import (
    PathDistribution,
    CompletePathSampler,
    dist_uniform,
    dist_lipschitz_power,
    dist_inverse_lipschitz,
)
from .solver import direction, SolverState, init_state, step, SolveReport, run
from .spectral import (
    path_laplacian,
    ExpectedLaplacian,
    expected_laplacian,
    complete_inverse_lipschitz_laplacian,
    algebraic_connectivity,
    strong_convexity_modulus,
    simplex_projection,
    design_connectivity,
    design_strong_convexity,
)
from .rates import (
    dual_norm,
    level_set_radii,
    bound_level_set,
    bound_complete_graph,
    bound_connectivity,
    bound_linear,
    RateCertificate,
    speedup_ratio,
)
from .feasibility import (
    Box,
    Ball,
    Halfspace,
    project,
    FeasibilityProblem,
    conjugate_value_grad,
    dual_objective,
    recover_primal,
    PrimalRecovery,
    solve_projection,
    primal_error_bounds,
    dual_radius_bound,
)
from .sdp import export_sdp, read_sdp, connectivity_heuristic_point
from . import reference

__version__ = "0.1.0"
