"""Projection onto an intersection of convex sets by running the solver on
the dual: each node owns one set, the dual blocks are the multipliers, and
the conjugate gradients recover per-node primal points inside the sets."""

from dataclasses import dataclass

import numpy as np

from .objectives import SeparableObjective
from .solver import run
from .spectral import algebraic_connectivity

__all__ = [
    "Box",
    "Ball",
    "Halfspace",
    "project",
    "FeasibilityProblem",
    "conjugate_value_grad",
    "dual_objective",
    "recover_primal",
    "PrimalRecovery",
    "solve_projection",
    "primal_error_bounds",
    "dual_radius_bound",
]


class ConvexSet:
    def project(self, z):
        raise NotImplementedError

    def contains(self, z, tol=1e-10):
        z = np.asarray(z, dtype=float)
        return float(np.linalg.norm(self.project(z) - z)) <= tol


@dataclass(frozen=True)
class Box(ConvexSet):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise ValueError("box needs lo <= hi componentwise")

    @property
    def dim(self):
        return self.lo.shape[0]

    def project(self, z):
        return np.clip(np.asarray(z, dtype=float), self.lo, self.hi)


@dataclass(frozen=True)
class Ball(ConvexSet):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self):
        return self.center.shape[0]

    def project(self, z):
        z = np.asarray(z, dtype=float)
        r = z - self.center
        nrm = float(np.linalg.norm(r))
        if nrm <= self.radius:
            return z.copy()
        return self.center + (self.radius / nrm) * r


@dataclass(frozen=True)
class Halfspace(ConvexSet):
    """Points with <a, z> <= b."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        if float(np.linalg.norm(self.a)) == 0.0:
            raise ValueError("halfspace normal must be nonzero")

    @property
    def dim(self):
        return self.a.shape[0]

    def project(self, z):
        z = np.asarray(z, dtype=float)
        excess = float(self.a @ z) - self.b
        if excess <= 0:
            return z.copy()
        return z - (excess / float(self.a @ self.a)) * self.a


def project(cset, z):
    """Euclidean projection onto one set (closed form per kind)."""
    return cset.project(z)


@dataclass
class FeasibilityProblem:
    """Project ``v0`` onto the intersection of ``sets``.

    The primal objective is sum_i p_i ||v - v0||^2 over the intersection,
    with positive weights summing to one. A nonempty intersection is the
    caller's promise; the certificates are meaningless without it.

    ``loose_lipschitz`` switches the dual smoothness constants from the
    tight 1/(2 p_i) (the squared norm with weight p_i is 2 p_i strongly
    convex) to the looser 1/p_i convention, with the strong-convexity
    metric weights switching accordingly from 2 p_i to p_i.
    """

    sets: list
    v0: np.ndarray
    weights: np.ndarray = None
    loose_lipschitz: bool = False

    def __post_init__(self):
        self.v0 = np.asarray(self.v0, dtype=float)
        n = len(self.sets)
        if n < 1:
            raise ValueError("need at least one set")
        for q in self.sets:
            if q.dim != self.dim:
                raise ValueError("all sets must share the dimension of v0")
        if self.weights is None:
            self.weights = np.full(n, 1.0 / n)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (n,) or np.any(self.weights <= 0):
            raise ValueError("weights must be positive, one per set")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {self.weights.sum()!r}, not 1")

    @property
    def n_nodes(self):
        return len(self.sets)

    @property
    def dim(self):
        return self.v0.shape[0]

    @property
    def dual_lipschitz(self):
        p = self.weights
        return 1.0 / p if self.loose_lipschitz else 1.0 / (2.0 * p)

    @property
    def primal_strong_convexity(self):
        p = self.weights
        return p if self.loose_lipschitz else 2.0 * p

    def primal_value(self, u):
        """sum_i p_i ||u_i - v0||^2 for stacked per-node points."""
        u = np.asarray(u, dtype=float)
        r = u - self.v0
        return float(np.sum(self.weights * np.sum(r * r, axis=1)))


def conjugate_value_grad(prob, i, x_i):
    """Value and gradient of the node-i dual term.

    The dual term is the conjugate of p_i ||. - v0||^2 restricted to the
    set: its maximizer is the projection of v0 + x_i/(2 p_i) onto the set,
    which is also the gradient.
    """
    x_i = np.asarray(x_i, dtype=float)
    p = prob.weights[i]
    u = prob.sets[i].project(prob.v0 + x_i / (2.0 * p))
    r = u - prob.v0
    val = float(x_i @ u) - p * float(r @ r)
    return val, u


class _ConjugateObjective(SeparableObjective):
    def __init__(self, prob):
        super().__init__(prob.n_nodes, prob.dim, prob.dual_lipschitz)
        self.prob = prob

    def node_values(self, idx, xs):
        out = np.empty(len(idx))
        for k, i in enumerate(np.asarray(idx, dtype=int)):
            out[k], _ = conjugate_value_grad(self.prob, i, xs[k])
        return out

    def node_grads(self, idx, xs):
        out = np.empty((len(idx), self.block_dim))
        for k, i in enumerate(np.asarray(idx, dtype=int)):
            _, out[k] = conjugate_value_grad(self.prob, i, xs[k])
        return out


def dual_objective(prob):
    """The separable dual objective the solver runs on."""
    return _ConjugateObjective(prob)


def recover_primal(prob, x):
    """Per-node primal points u_i(x_i), each inside its own set."""
    x = np.asarray(x, dtype=float)
    u = np.empty_like(x)
    for i in range(prob.n_nodes):
        _, u[i] = conjugate_value_grad(prob, i, x[i])
    return u


@dataclass
class PrimalRecovery:
    """Recovered primal points with agreement and duality diagnostics.

    ``spread`` is the strong-convexity-weighted scatter of the per-node
    points around their mean (zero exactly when all nodes agree);
    ``duality_gap`` is f(x) + g(u), which vanishes at the optimum.
    """

    u: np.ndarray
    spread: float
    duality_gap: float
    membership_residual: float


def _diagnostics(prob, x, u, f_value):
    sigma = prob.primal_strong_convexity
    mean = u.mean(axis=0)
    r = u - mean
    spread = float(np.sum(sigma * np.sum(r * r, axis=1)))
    gap = f_value + prob.primal_value(u)
    resid = max(
        float(np.linalg.norm(prob.sets[i].project(u[i]) - u[i]))
        for i in range(prob.n_nodes)
    )
    return PrimalRecovery(u, spread, gap, resid)


def solve_projection(prob, dist, iterations, seed=0, trace_stride=None,
                     snapshot_stride=None, norm_ceiling=1e8):
    """Run the block descent method on the dual from the zero start.

    Returns the recovered primal points (with diagnostics) and the solver
    report. Snapshots of the dual iterate, when requested, let the caller
    recover the primal trajectory afterwards. Empty intersections are not
    detected up front; the dual is then unbounded and the run aborts once
    the iterate magnitude passes ``norm_ceiling``.
    """
    obj = dual_objective(prob)
    x0 = np.zeros((prob.n_nodes, prob.dim))
    report = run(
        obj, dist, x0, iterations=iterations, seed=seed,
        trace_stride=trace_stride, snapshot_stride=snapshot_stride,
        abs_ceiling=norm_ceiling,
    )
    u = recover_primal(prob, report.x)
    return _diagnostics(prob, report.x, u, report.f_final), report


def primal_error_bounds(radius, largest_eig, sigma_min):
    """The two certified decay curves for the recovered primal points.

    With a level-set radius R of the dual start in the dual norm, the
    weighted distance to the common optimum decays like 4 R^2 / k and the
    primal value error like 4 R^2 lambda_max / (sigma_min sqrt(k)).
    """
    if sigma_min <= 0:
        raise ValueError("sigma_min must be positive")

    def infeasibility_bound(k):
        return 4.0 * radius ** 2 / np.asarray(k, dtype=float)

    def suboptimality_bound(k):
        return (4.0 * radius ** 2 * largest_eig
                / (sigma_min * np.sqrt(np.asarray(k, dtype=float))))

    return infeasibility_bound, suboptimality_bound


def _interior_margin(cset, z):
    """Largest r with the ball B(z, r) inside the set (closed form per kind)."""
    if isinstance(cset, Box):
        return float(min(np.min(z - cset.lo), np.min(cset.hi - z)))
    if isinstance(cset, Ball):
        return float(cset.radius - np.linalg.norm(z - cset.center))
    if isinstance(cset, Halfspace):
        return float((cset.b - cset.a @ z) / np.linalg.norm(cset.a))
    raise TypeError(f"unsupported set type {type(cset).__name__}")


def dual_radius_bound(prob, gl, interior_point, interior_radius):
    """Certified level-set radius of the dual start x = 0 in the dual norm.

    Needs a ball B(z, r) inside every set (checked). Supporting each
    conjugate from points of that ball shows the dual objective grows at
    slope r along zero-sum rays, which traps the level set of the zero
    start in a Euclidean ball; dividing by the square root of the algebraic
    connectivity converts its size to the dual norm.
    """
    z = np.asarray(interior_point, dtype=float)
    r = float(interior_radius)
    if r <= 0:
        raise ValueError("interior radius must be positive")
    for i, q in enumerate(prob.sets):
        if _interior_margin(q, z) < r - 1e-12:
            raise ValueError(f"ball B(z, {r}) is not inside set {i}")
    d_max = float(np.linalg.norm(z - prob.v0)) + r
    f0 = -float(np.sum(prob.weights
                       * np.array([np.linalg.norm(q.project(prob.v0) - prob.v0) ** 2
                                   for q in prob.sets])))
    rho = (f0 + d_max ** 2) / r
    return 2.0 * rho / np.sqrt(algebraic_connectivity(gl))
