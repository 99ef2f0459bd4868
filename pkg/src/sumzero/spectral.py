"""Update-gain Laplacians, their spectra, and probability design by subgradient ascent."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .probability import PathDistribution, dist_uniform, dist_inverse_lipschitz

__all__ = [
    "path_laplacian",
    "ExpectedLaplacian",
    "expected_laplacian",
    "complete_inverse_lipschitz_laplacian",
    "algebraic_connectivity",
    "strong_convexity_modulus",
    "simplex_projection",
    "design_connectivity",
    "design_strong_convexity",
]


def path_laplacian(lipschitz, path):
    """Per-path decrease matrix on the path's own indices.

    For the nodes of one path, with inverse constants v_i = 1/L_i, this is
    diag(v) - v v^T / sum(v): positive semidefinite, with row sums zero, so
    it acts as a Laplacian of the clique on the path's vertex set.
    """
    L = np.asarray(lipschitz, dtype=float)
    v = 1.0 / L[np.asarray(path, dtype=int)]
    return np.diag(v) - np.outer(v, v) / v.sum()


@dataclass(frozen=True)
class ExpectedLaplacian:
    """Probability-weighted average of per-path decrease matrices.

    A weighted Laplacian of the communication graph: symmetric PSD, kernel
    containing the all-ones vector, and with a positive second eigenvalue
    exactly when the sampled paths connect the graph. Eigenvalues are sorted
    ascending and the columns of ``eigenvectors`` match them.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_matrix(cls, g):
        g = np.asarray(g, dtype=float)
        g = 0.5 * (g + g.T)
        vals, vecs = np.linalg.eigh(g)
        return cls(g, vals, vecs)

    @property
    def n_nodes(self):
        return self.matrix.shape[0]

    @property
    def largest_eigenvalue(self):
        return float(self.eigenvalues[-1])


def _scatter_paths(n, paths_arr, weights, lipschitz):
    """Accumulate weighted per-path decrease matrices into an n x n matrix."""
    v = (1.0 / np.asarray(lipschitz, dtype=float))[paths_arr]   # (P, tau)
    s = v.sum(axis=1)
    blocks = -v[:, :, None] * v[:, None, :] / s[:, None, None]
    tau = paths_arr.shape[1]
    blocks[:, np.arange(tau), np.arange(tau)] += v
    blocks *= np.asarray(weights, dtype=float)[:, None, None]
    g = np.zeros((n, n))
    np.add.at(g, (paths_arr[:, :, None], paths_arr[:, None, :]), blocks)
    return g


def expected_laplacian(lipschitz, dist):
    """Assemble the expected decrease matrix of a path distribution.

    Raises if the supported paths leave some node untouched or fail to
    connect the graph: the matrix would then have a repeated zero eigenvalue
    and certify nothing.
    """
    if not isinstance(dist, PathDistribution):
        raise TypeError("expected_laplacian needs an explicit PathDistribution")
    n = dist.n_nodes
    live = dist.p > 0
    live_paths = dist.pathset.paths_array[live]
    # union-find over the supported paths: each couples all its nodes
    root = list(range(n))

    def find(a):
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for row in live_paths:
        r0 = find(int(row[0]))
        for v in row[1:]:
            root[find(int(v))] = r0
    classes = {find(v) for v in range(n)}
    if len(classes) != 1:
        raise ValueError(
            f"support does not cover a connected graph ({len(classes)} components)"
        )
    g = _scatter_paths(n, live_paths, dist.p[live], lipschitz)
    return ExpectedLaplacian.from_matrix(g)


def complete_inverse_lipschitz_laplacian(lipschitz, tau):
    """Closed form of the expected decrease matrix on the complete graph
    under inverse-Lipschitz path probabilities:

        (tau-1)/(n-1) * [diag(1/L) - (1/L)(1/L)^T / sum(1/L)].

    Valid for any tau, which makes the spectrum available at sizes where the
    path set cannot be enumerated.
    """
    L = np.asarray(lipschitz, dtype=float)
    n = L.shape[0]
    if not (2 <= tau <= n):
        raise ValueError(f"tau must be in [2, {n}], got {tau}")
    v = 1.0 / L
    g = (tau - 1) / (n - 1) * (np.diag(v) - np.outer(v, v) / v.sum())
    return ExpectedLaplacian.from_matrix(g)


def algebraic_connectivity(gl):
    """Second-smallest eigenvalue; positive iff the sampled paths connect the graph."""
    return float(gl.eigenvalues[1])


def _ones_complement_basis(n):
    """Orthonormal basis of the subspace orthogonal to the all-ones vector."""
    m = np.eye(n)
    m[:, 0] = 1.0 / np.sqrt(n)
    q, _ = np.linalg.qr(m)
    return q[:, 1:]


def strong_convexity_modulus(gl, sigma, clamp=True):
    """Strong-convexity modulus of f in the dual norm of the decrease matrix.

    Equals the smallest generalized eigenvalue of (G, diag(1/sigma))
    restricted to the zero-sum subspace, i.e. the supremum over ridge shifts
    of the admissible modulus in

        modulus * I <= D_sigma^(1/2) (G + zeta 11^T) D_sigma^(1/2).

    The linear rate (1 - modulus)^k only makes sense for modulus <= 1, so the
    value is clamped to [0, 1] unless ``clamp`` is False.
    """
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("all strong convexity constants must be positive")
    n = gl.n_nodes
    if sigma.shape != (n,):
        raise ValueError(f"sigma must have shape ({n},)")
    b = _ones_complement_basis(n)
    a = b.T @ gl.matrix @ b
    m = b.T @ np.diag(1.0 / sigma) @ b
    vals = scipy.linalg.eigh(a, m, eigvals_only=True)
    mu = float(vals[0])
    if clamp:
        mu = min(max(mu, 0.0), 1.0)
    return mu


def simplex_projection(v):
    """Euclidean projection onto the probability simplex (sort-and-threshold)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > css)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _quad_forms(paths_arr, lipschitz, x):
    """x^T G_path x for every path, vectorized over the path array."""
    v = (1.0 / np.asarray(lipschitz, dtype=float))[paths_arr]
    xs = x[paths_arr]
    return (v * xs * xs).sum(axis=1) - (v * xs).sum(axis=1) ** 2 / v.sum(axis=1)


def _ascend(ps, lipschitz, objective_and_supergrad, candidates, iters, step_scale):
    """Projected supergradient ascent on the simplex, keeping the best iterate.

    ``objective_and_supergrad`` maps a probability vector to the concave
    objective value and one supergradient; ``candidates`` is a list of
    heuristic probability vectors also scored when picking the winner. Steps
    are normalized, p + (c/sqrt(t+1)) g/|g|, with c in units of simplex
    displacement; scaling by per-path matrix norms instead stalls on large
    path sets, where the supergradient spreads over thousands of entries.
    """
    if step_scale is None:
        step_scale = 0.05

    best_p, best_val = None, -np.inf
    for q in candidates:
        val, _ = objective_and_supergrad(q)
        if val > best_val:
            best_p, best_val = q.copy(), val

    p = candidates[0].copy()
    for t in range(iters):
        val, g = objective_and_supergrad(p)
        if val > best_val:
            best_p, best_val = p.copy(), val
        norm = np.linalg.norm(g)
        if norm == 0.0:
            break
        p = simplex_projection(p + step_scale / np.sqrt(t + 1.0) / norm * g)
    val, _ = objective_and_supergrad(p)
    if val > best_val:
        best_p, best_val = p.copy(), val
    return PathDistribution(ps, best_p), best_val


def design_connectivity(ps, lipschitz, iters=300, step_scale=None):
    """Pick path probabilities maximizing the algebraic connectivity.

    The objective p -> lambda_2(G(p)) is a minimum of linear functions of p,
    hence concave; a supergradient at p is the vector of quadratic forms
    u^T G_path u for a unit second eigenvector u orthogonal to the ones
    vector. Ascent starts from the uniform distribution and the returned
    distribution is the best iterate seen, never worse than the uniform or
    inverse-Lipschitz heuristics (both are scored as candidates).
    """
    L = np.asarray(lipschitz, dtype=float)
    n = ps.network.n_nodes
    paths_arr = ps.paths_array
    b = _ones_complement_basis(n)

    def objective(p):
        g = _scatter_paths(n, paths_arr, p, L)
        red = b.T @ g @ b
        vals, vecs = np.linalg.eigh(red)
        u = b @ vecs[:, 0]
        return float(vals[0]), _quad_forms(paths_arr, L, u)

    cands = [dist_uniform(ps).p, dist_inverse_lipschitz(ps, L).p]
    dist, _ = _ascend(ps, L, objective, cands, iters, step_scale)
    return dist


def design_strong_convexity(ps, lipschitz, sigma, iters=300, step_scale=None):
    """Pick path probabilities maximizing the strong-convexity modulus.

    Same ascent as :func:`design_connectivity` with the generalized
    eigenvalue objective; the supergradient uses the minimizing generalized
    eigenvector normalized in the diag(1/sigma) metric.
    """
    L = np.asarray(lipschitz, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("all strong convexity constants must be positive")
    n = ps.network.n_nodes
    paths_arr = ps.paths_array
    b = _ones_complement_basis(n)
    m = b.T @ np.diag(1.0 / sigma) @ b

    def objective(p):
        g = _scatter_paths(n, paths_arr, p, L)
        red = b.T @ g @ b
        vals, vecs = scipy.linalg.eigh(red, m)
        u = b @ vecs[:, 0]          # normalized so that u^T diag(1/sigma) u = 1
        return float(vals[0]), _quad_forms(paths_arr, L, u)

    cands = [dist_uniform(ps).p, dist_inverse_lipschitz(ps, L).p]
    dist, _ = _ascend(ps, L, objective, cands, iters, step_scale)
    return dist
