"""Independent brute-force references: exact optima, KKT directions,
exhaustive expectations and a Dykstra projector. Deliberately slow and
simple; the tests trust these, not the fast paths they check."""

import numpy as np

__all__ = [
    "optimal_multiplier",
    "qp_direction",
    "expected_decrease_exhaustive",
    "dykstra_projection",
    "finite_difference_grad",
    "modulus_zeta_scan",
]


def _solve_nodes(obj, lam, lo, hi, newton_iters=6, bisect_iters=200):
    """Vectorized solve of grad f_i(x_i) = lam on the brackets [lo, hi]."""
    idx = np.arange(obj.n_nodes)
    for _ in range(bisect_iters):
        mid = 0.5 * (lo + hi)
        g = obj.node_grads(idx, mid[:, None])[:, 0]
        high = g > lam
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
        if np.all(hi - lo <= 1e-15 * (1.0 + np.abs(mid))):
            break
    x = 0.5 * (lo + hi)
    # safeguarded Newton polish when curvature information exists
    for _ in range(newton_iters):
        curv = obj.node_curvatures(idx, x[:, None])
        if curv is None:
            break
        g = obj.node_grads(idx, x[:, None])[:, 0]
        stepped = x - (g - lam) / np.maximum(curv, 1e-300)
        x = np.clip(stepped, lo, hi)
    return x


def _brackets(obj, lam, width0=1.0, max_expand=200):
    """Per-node brackets [lo, hi] with grad(lo) <= lam <= grad(hi)."""
    idx = np.arange(obj.n_nodes)
    lo = np.zeros(obj.n_nodes)
    hi = np.zeros(obj.n_nodes)
    w = np.full(obj.n_nodes, width0)
    for _ in range(max_expand):
        bad = obj.node_grads(idx, lo[:, None])[:, 0] > lam
        if not np.any(bad):
            break
        lo[bad] -= w[bad]
        w[bad] *= 2.0
    else:
        raise ValueError("no bracket: gradient never goes below the multiplier")
    w = np.full(obj.n_nodes, width0)
    for _ in range(max_expand):
        bad = obj.node_grads(idx, hi[:, None])[:, 0] < lam
        if not np.any(bad):
            break
        hi[bad] += w[bad]
        w[bad] *= 2.0
    else:
        raise ValueError("no bracket: gradient never goes above the multiplier")
    return lo, hi


def optimal_multiplier(obj, tol_scale=1e-12, max_expand=200):
    """Exact optimum of a scalar separable zero-sum problem.

    At the optimum all node gradients equal one multiplier. The outer loop
    bisects that multiplier (the node solutions sum monotonically in it);
    the inner loop inverts each node gradient by bisection with a Newton
    polish. Returns (multiplier, x_star, f_star) where f_star is the value
    of the concave dual at the final multiplier, a certified lower bound
    that matches f(x_star) to within the bracket width.
    """
    if obj.block_dim != 1:
        raise ValueError("optimal_multiplier handles scalar blocks only")
    n = obj.n_nodes
    target = tol_scale * n

    def sum_at(lam):
        lo, hi = _brackets(obj, lam, max_expand=max_expand)
        x = _solve_nodes(obj, lam, lo, hi)
        return x, float(x.sum())

    lam_lo, lam_hi = -1.0, 1.0
    x, s = sum_at(lam_lo)
    w = 1.0
    for _ in range(max_expand):
        if s <= 0:
            break
        lam_lo -= w
        w *= 2.0
        x, s = sum_at(lam_lo)
    else:
        raise ValueError("no bracket for the optimal multiplier (level sums stay positive)")
    x, s = sum_at(lam_hi)
    w = 1.0
    for _ in range(max_expand):
        if s >= 0:
            break
        lam_hi += w
        w *= 2.0
        x, s = sum_at(lam_hi)
    else:
        raise ValueError("no bracket for the optimal multiplier (level sums stay negative)")

    for _ in range(400):
        lam = 0.5 * (lam_lo + lam_hi)
        x, s = sum_at(lam)
        if abs(s) <= target:
            break
        if s > 0:
            lam_hi = lam
        else:
            lam_lo = lam
        if lam_hi - lam_lo <= 1e-18 * (1.0 + abs(lam)):
            break

    f_dual = obj.value(x[:, None]) - lam * x.sum()
    x_star = x - x.sum() / n
    return float(lam), x_star, float(f_dual)


def qp_direction(lipschitz_path, grads):
    """Zero-sum model minimizer by direct KKT factorization.

    Solves [diag(L), 1; 1^T, 0] [s; mu] = [-g; 0] for the update s; the
    closed-form direction of the solver must match this on every instance.
    """
    L = np.asarray(lipschitz_path, dtype=float)
    g = np.asarray(grads, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    t = len(L)
    kkt = np.zeros((t + 1, t + 1))
    kkt[:t, :t] = np.diag(L)
    kkt[:t, t] = 1.0
    kkt[t, :t] = 1.0
    rhs = np.zeros((t + 1, g.shape[1]))
    rhs[:t] = -g
    sol = np.linalg.solve(kkt, rhs)
    s = sol[:t]
    return s[:, 0] if np.asarray(grads).ndim == 1 else s


def expected_decrease_exhaustive(obj, x, dist, max_paths=100_000):
    """E[f(x+)] by enumerating every path of an explicit distribution."""
    ps = getattr(dist, "pathset", None)
    if ps is None:
        raise ValueError("exhaustive expectation needs an explicit PathDistribution")
    if len(ps) > max_paths:
        raise ValueError(f"path set too large to enumerate ({len(ps)} > {max_paths})")
    x = obj.as_state(x)
    linv = 1.0 / obj.lipschitz
    total = 0.0
    for path, prob in zip(ps.paths_array, dist.p):
        if prob == 0.0:
            continue
        xp = x.copy()
        grads = obj.node_grads(path, x[path])
        v = linv[path]
        mean = (v @ grads) / v.sum()
        xp[path] += v[:, None] * (mean - grads)
        total += prob * obj.value(xp)
    return total


def dykstra_projection(sets, v0, tol=1e-12, max_cycles=100_000):
    """Nearest point of an intersection of convex sets, via Dykstra's method.

    Plain cyclic projections find *a* point of the intersection; the
    correction vectors are what make the limit the projection of v0 itself.
    """
    v = np.asarray(v0, dtype=float).copy()
    corrections = [np.zeros_like(v) for _ in sets]
    for _ in range(max_cycles):
        shift = 0.0
        for i, q in enumerate(sets):
            prev = v
            v = q.project(prev + corrections[i])
            corrections[i] = prev + corrections[i] - v
            shift += float(np.linalg.norm(v - prev))
        if shift <= tol:
            return v
    raise RuntimeError(f"Dykstra did not settle within {max_cycles} cycles")


def finite_difference_grad(f, x, h=1e-6):
    """Central finite differences of a scalar function of a vector."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e.flat[j] = h
        g.flat[j] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def modulus_zeta_scan(g_matrix, sigma, zetas=None):
    """Brute-force strong-convexity modulus: for each ridge shift take the
    smallest eigenvalue of D_sigma^(1/2) (G + zeta 11^T) D_sigma^(1/2) and
    return the best over the grid."""
    g = np.asarray(g_matrix, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    n = g.shape[0]
    if zetas is None:
        zetas = np.concatenate(([0.0], np.geomspace(1e-6, 1e8, 120)))
    rt = np.sqrt(sigma)
    ones = np.ones((n, n))
    best = -np.inf
    for z in zetas:
        m = rt[:, None] * (g + z * ones) * rt[None, :]
        lam = float(np.linalg.eigvalsh(m)[0])
        best = max(best, lam)
    return best
