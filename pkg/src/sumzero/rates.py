"""Dual-norm machinery and convergence-rate certificates."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "dual_norm",
    "level_set_radii",
    "bound_level_set",
    "bound_complete_graph",
    "bound_connectivity",
    "bound_linear",
    "RateCertificate",
    "certificate_level_set",
    "certificate_complete_graph",
    "certificate_connectivity",
    "certificate_linear",
    "first_iteration_below",
    "speedup_ratio",
]

PSEUDOINVERSE_CUTOFF = 1e-12


def dual_norm(gl, x):
    """Norm of a zero-sum vector in the metric of the decrease matrix's
    pseudoinverse, sqrt(x^T G^+ x); block states accumulate over columns.

    Eigenvalues below ``PSEUDOINVERSE_CUTOFF`` times the largest one are
    treated as zero and excluded, which removes the ones-direction the
    argument cannot have anyway.
    """
    x = np.asarray(x, dtype=float)
    x2 = x[:, None] if x.ndim == 1 else x
    gap = float(np.abs(x2.sum(axis=0)).max())
    if gap > 1e-8 * (1.0 + float(np.abs(x2).max())):
        raise ValueError(f"argument is not in the zero-sum subspace (|sum| = {gap:.3e})")
    vals = gl.eigenvalues
    keep = vals > PSEUDOINVERSE_CUTOFF * vals[-1]
    coeff = gl.eigenvectors.T @ x2
    return float(np.sqrt(np.sum(coeff[keep] ** 2 / vals[keep, None])))


def _node_scalar(obj, i):
    def f(t):
        return obj.node_value(i, t)

    def g(t):
        return float(obj.node_grad(i, t)[0])

    return f, g


def _expand_until(pred, start, direction, max_expand=200):
    """First point t = start + direction*w with pred(t), doubling w."""
    w = 1.0
    for _ in range(max_expand):
        t = start + direction * w
        if pred(t):
            return t
        w *= 2.0
    raise ValueError("unbounded level set: no finite radius certificate exists")


def _node_minimum(obj, i, anchor):
    """Certified lower bound on min_t f_i(t) for a scalar convex node."""
    f, g = _node_scalar(obj, i)
    if g(anchor) <= 0:
        lo, hi = anchor, _expand_until(lambda t: g(t) >= 0, anchor, +1.0)
    else:
        lo, hi = _expand_until(lambda t: g(t) <= 0, anchor, -1.0), anchor
    if g(lo) == 0.0:
        t_min = lo
    elif g(hi) == 0.0:
        t_min = hi
    else:
        t_min = brentq(g, lo, hi, xtol=1e-13, rtol=1e-15)
    # slack covers the residual gradient at the numerical minimizer
    return f(t_min) - abs(g(t_min)) * (hi - lo) - 1e-15 * (1.0 + abs(f(t_min)))


def level_set_radii(obj, f0, optimum):
    """Per-node radii certifying |x_i - x*_i| <= R_i on the level set f <= f0.

    Any x with f(x) <= f0 has f_i(x_i) <= f0 - sum_{j != i} min f_j, so the
    radius for node i is found by bisecting f_i to that budget on both sides
    of the optimal block. Scalar objectives only.

    Parameters
    ----------
    obj : SeparableObjective with block_dim 1
    f0 : float
        Level defining the set, typically f at the start.
    optimum : tuple
        (multiplier, x_star, f_star) from reference.optimal_multiplier.
    """
    if obj.block_dim != 1:
        raise ValueError("level_set_radii handles scalar blocks only")
    _, x_star, f_star = optimum
    if f0 < f_star - 1e-9 * (1.0 + abs(f_star)):
        raise ValueError(f"level {f0} lies below the optimal value {f_star}")
    n = obj.n_nodes
    mins = np.array([_node_minimum(obj, i, x_star[i]) for i in range(n)])
    total_min = mins.sum()
    radii = np.empty(n)
    for i in range(n):
        f, _ = _node_scalar(obj, i)
        budget = f0 - (total_min - mins[i])
        anchor = x_star[i]
        if f(anchor) > budget:
            # only rounding can put the optimal block above its budget
            radii[i] = 0.0
            continue

        def h(t):
            return f(t) - budget

        hi = _expand_until(lambda t: h(t) >= 0, anchor, +1.0)
        right = hi if h(hi) == 0 else brentq(h, anchor, hi, xtol=1e-12, rtol=1e-14)
        lo = _expand_until(lambda t: h(t) >= 0, anchor, -1.0)
        left = lo if h(lo) == 0 else brentq(h, lo, anchor, xtol=1e-12, rtol=1e-14)
        radii[i] = max(right - anchor, anchor - left)
    return radii


# -- certified decay curves ----------------------------------------------


def bound_level_set(radius, k):
    """Sublinear certificate 2 R^2 / k from the level-set radius in the dual norm."""
    k = np.asarray(k, dtype=float)
    return 2.0 * radius ** 2 / k


def bound_complete_graph(lipschitz, radii, tau, k):
    """Complete-graph certificate (n-1)/(tau-1) * 2 sum_i L_i R_i^2 / k under
    inverse-Lipschitz path probabilities."""
    L = np.asarray(lipschitz, dtype=float)
    R = np.asarray(radii, dtype=float)
    n = L.shape[0]
    k = np.asarray(k, dtype=float)
    return (n - 1) / (tau - 1) * 2.0 * float(np.sum(L * R * R)) / k


def bound_connectivity(radii, lam2, k):
    """Certificate 2 sum_i R_i^2 / (lambda_2 k) from the algebraic connectivity."""
    R = np.asarray(radii, dtype=float)
    k = np.asarray(k, dtype=float)
    return 2.0 * float(np.sum(R * R)) / (lam2 * k)


def bound_linear(modulus, gap0, k):
    """Linear certificate (1 - modulus)^k * gap0 for strongly convex objectives."""
    if not (0.0 < modulus <= 1.0):
        raise ValueError(f"modulus must lie in (0, 1], got {modulus}")
    k = np.asarray(k, dtype=float)
    return (1.0 - modulus) ** k * gap0


@dataclass(frozen=True)
class RateCertificate:
    """A named certified decay curve with the parameters that built it."""

    kind: str
    params: dict

    def bound(self, k):
        if self.kind == "level_set":
            return bound_level_set(self.params["radius"], k)
        if self.kind == "complete_graph":
            return bound_complete_graph(
                self.params["lipschitz"], self.params["radii"], self.params["tau"], k
            )
        if self.kind == "connectivity":
            return bound_connectivity(self.params["radii"], self.params["lambda2"], k)
        if self.kind == "linear":
            return bound_linear(self.params["modulus"], self.params["gap0"], k)
        raise ValueError(f"unknown certificate kind {self.kind!r}")


def certificate_level_set(radius):
    return RateCertificate("level_set", {"radius": float(radius)})


def certificate_complete_graph(lipschitz, radii, tau):
    return RateCertificate(
        "complete_graph",
        {"lipschitz": np.asarray(lipschitz, float), "radii": np.asarray(radii, float),
         "tau": int(tau)},
    )


def certificate_connectivity(radii, lam2):
    return RateCertificate(
        "connectivity", {"radii": np.asarray(radii, float), "lambda2": float(lam2)}
    )


def certificate_linear(modulus, gap0):
    return RateCertificate("linear", {"modulus": float(modulus), "gap0": float(gap0)})


def first_iteration_below(trace_k, gaps, eps):
    """Smallest recorded k whose gap is at most eps."""
    gaps = np.asarray(gaps, dtype=float)
    idx = np.nonzero(gaps <= eps)[0]
    if idx.size == 0:
        raise ValueError(f"target gap {eps} never reached (final gap {gaps[-1]:.3e})")
    return int(np.asarray(trace_k)[idx[0]])


def speedup_ratio(trace_a, trace_b, eps):
    """Ratio of iterations the two traces need to reach the gap eps.

    Each trace is a (k, gap) pair of arrays; returns k_a(eps) / k_b(eps).
    """
    ka = first_iteration_below(*trace_a, eps)
    kb = first_iteration_below(*trace_b, eps)
    if kb == 0:
        raise ValueError("second trace starts at or below the target gap")
    return ka / kb
