"""Separable objectives f(x) = sum_i f_i(x_i) with known gradient smoothness."""

import math

import numpy as np

__all__ = [
    "SeparableObjective",
    "QuadLogistic",
    "QuadLogisticParams",
    "Quadratic",
    "CallableObjective",
    "make_quad_logistic",
    "normalize_constraint",
]


def sigmoid(t):
    """Overflow-safe logistic function."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    et = np.exp(t[~pos])
    out[~pos] = et / (1.0 + et)
    return out


def softplus(t):
    """Overflow-safe log(1 + exp(t)): for t > 0 computed as t + log1p(exp(-t))."""
    t = np.asarray(t, dtype=float)
    return np.maximum(t, 0.0) + np.log1p(np.exp(-np.abs(t)))


class SeparableObjective:
    """Base class: per-node convex terms, gradients, and smoothness constants.

    Subclasses implement the vectorized `node_values` / `node_grads` over an
    index array. States are matrices of shape (n_nodes, block_dim); the
    scalar case uses block_dim 1 and accepts flat (n_nodes,) vectors at the
    public entry points.

    Attributes
    ----------
    n_nodes : int
    block_dim : int
    lipschitz : ndarray, shape (n_nodes,)
        Per-node gradient Lipschitz constants, all positive.
    strong_convexity : ndarray or None
        Per-node strong convexity moduli, 0 <= sigma_i <= L_i.
    """

    def __init__(self, n_nodes, block_dim, lipschitz, strong_convexity=None):
        self.n_nodes = int(n_nodes)
        self.block_dim = int(block_dim)
        L = np.asarray(lipschitz, dtype=float)
        if L.shape != (self.n_nodes,):
            raise ValueError(f"lipschitz must have shape ({self.n_nodes},)")
        if not np.all(L > 0):
            raise ValueError("all Lipschitz constants must be positive")
        self.lipschitz = L
        if strong_convexity is not None:
            s = np.asarray(strong_convexity, dtype=float)
            if s.shape != (self.n_nodes,):
                raise ValueError(f"strong_convexity must have shape ({self.n_nodes},)")
            if np.any(s < 0) or np.any(s > L * (1 + 1e-12)):
                raise ValueError("need 0 <= sigma_i <= L_i")
            self.strong_convexity = s
        else:
            self.strong_convexity = None

    # -- subclass surface -------------------------------------------------

    def node_values(self, idx, xs):
        """Values f_i(x_i) for nodes idx; xs has shape (len(idx), block_dim)."""
        raise NotImplementedError

    def node_grads(self, idx, xs):
        """Gradients, shape (len(idx), block_dim)."""
        raise NotImplementedError

    def node_curvatures(self, idx, xs):
        """Second derivatives for scalar objectives, or None when unknown."""
        return None

    def node_value_diff(self, idx, xs, ds):
        """f_i(x_i + d_i) - f_i(x_i), overridable with a cancellation-free form."""
        return self.node_values(idx, xs + ds) - self.node_values(idx, xs)

    def scalar_kernel(self):
        """Optional plain-float (grad, value_diff) pair for the solver's
        scalar inner loop; None means only the vectorized path exists."""
        return None

    # -- public surface ----------------------------------------------------

    def as_state(self, x):
        """Validate and reshape x to the canonical (n_nodes, block_dim)."""
        x = np.asarray(x, dtype=float)
        if x.shape == (self.n_nodes,) and self.block_dim == 1:
            x = x[:, None]
        if x.shape != (self.n_nodes, self.block_dim):
            raise ValueError(
                f"state must have shape ({self.n_nodes}, {self.block_dim}), got {x.shape}"
            )
        return x

    def value(self, x):
        """Total objective sum_i f_i(x_i)."""
        x = self.as_state(x)
        return float(np.sum(self.node_values(np.arange(self.n_nodes), x)))

    def node_value(self, i, x_i):
        self._check_index(i)
        xs = np.atleast_1d(np.asarray(x_i, dtype=float)).reshape(1, self.block_dim)
        return float(self.node_values(np.array([i]), xs)[0])

    def node_grad(self, i, x_i):
        """Gradient of f_i at x_i, shape (block_dim,)."""
        self._check_index(i)
        xs = np.atleast_1d(np.asarray(x_i, dtype=float)).reshape(1, self.block_dim)
        return self.node_grads(np.array([i]), xs)[0]

    def all_grads(self, x):
        """Stacked gradients at every node, shape (n_nodes, block_dim)."""
        x = self.as_state(x)
        return self.node_grads(np.arange(self.n_nodes), x)

    def _check_index(self, i):
        if not (0 <= int(i) < self.n_nodes):
            raise IndexError(f"node index {i} out of range [0, {self.n_nodes})")


class QuadLogisticParams:
    """Coefficient arrays of the quadratic-plus-logistic test family."""

    def __init__(self, a, b, c, d):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.d = np.asarray(d, dtype=float)
        n = self.a.shape[0]
        for name, arr in (("b", self.b), ("c", self.c), ("d", self.d)):
            if arr.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")
        if np.any(self.a < 0):
            raise ValueError("quadratic coefficients a_i must be nonnegative")

    @property
    def lipschitz(self):
        return self.a + 0.25 * self.b ** 2

    @property
    def strong_convexity(self):
        return self.a


class QuadLogistic(SeparableObjective):
    """f_i(t) = a_i/2 (t - c_i)^2 + log(1 + exp(b_i (t - d_i))).

    Curvature lies between a_i and a_i + b_i^2/4, which gives the strong
    convexity and Lipschitz constants. All logistic terms are evaluated in
    overflow-safe form.
    """

    def __init__(self, params):
        self.params = params
        L = params.lipschitz
        if np.any(L <= 0):
            raise ValueError("degenerate node with a_i = b_i = 0 has no positive L_i")
        super().__init__(len(params.a), 1, L, params.strong_convexity)

    def node_values(self, idx, xs):
        p = self.params
        x = xs[:, 0]
        quad = 0.5 * p.a[idx] * (x - p.c[idx]) ** 2
        return quad + softplus(p.b[idx] * (x - p.d[idx]))

    def node_grads(self, idx, xs):
        p = self.params
        x = xs[:, 0]
        g = p.a[idx] * (x - p.c[idx]) + p.b[idx] * sigmoid(p.b[idx] * (x - p.d[idx]))
        return g[:, None]

    def node_curvatures(self, idx, xs):
        p = self.params
        s = sigmoid(p.b[idx] * (xs[:, 0] - p.d[idx]))
        return p.a[idx] + p.b[idx] ** 2 * s * (1.0 - s)

    def node_value_diff(self, idx, xs, ds):
        # Quadratic part differenced exactly; logistic part via
        # log((1+e^{u+h})/(1+e^u)) = log1p(expm1(h) sigmoid(u)), whose error
        # scales with |d|. Near-cancellation of that argument (h << 0 with
        # u >> 0) and overflow of expm1 fall back to a shifted softplus
        # difference, exact in its linear part.
        p = self.params
        x, d = xs[:, 0], ds[:, 0]
        quad = p.a[idx] * d * (x - p.c[idx] + 0.5 * d)
        u = p.b[idx] * (x - p.d[idx])
        h = p.b[idx] * d
        arg = np.expm1(np.clip(h, -30.0, 30.0)) * sigmoid(u)
        prod = (np.abs(h) < 30.0) & (arg > -0.5)
        v = u + h
        lin = np.maximum(v, 0.0) - np.maximum(u, 0.0)
        shifted = lin + np.log1p(np.exp(-np.abs(v))) - np.log1p(np.exp(-np.abs(u)))
        log_part = np.where(prod, np.log1p(np.where(prod, arg, 0.0)), shifted)
        return quad + log_part

    def scalar_kernel(self):
        a = self.params.a.tolist()
        b = self.params.b.tolist()
        c = self.params.c.tolist()
        dd = self.params.d.tolist()
        exp, log1p, expm1 = math.exp, math.log1p, math.expm1

        def _sig(u):
            if u >= 0.0:
                return 1.0 / (1.0 + exp(-u))
            t = exp(u)
            return t / (1.0 + t)

        def grad(i, x):
            return a[i] * (x - c[i]) + b[i] * _sig(b[i] * (x - dd[i]))

        def value_diff(i, x, d):
            quad = a[i] * d * (x - c[i] + 0.5 * d)
            u = b[i] * (x - dd[i])
            h = b[i] * d
            if -30.0 < h < 30.0:
                arg = expm1(h) * _sig(u)
                if arg > -0.5:
                    return quad + log1p(arg)
            v = u + h
            lin = (v if v > 0.0 else 0.0) - (u if u > 0.0 else 0.0)
            return quad + lin + log1p(exp(-abs(v))) - log1p(exp(-abs(u)))

        return grad, value_diff


def make_quad_logistic(n, seed, a_min=0.0, scale=15.0):
    """Random instance of the quadratic-plus-logistic family.

    All four coefficient vectors are drawn uniformly from [-scale, scale];
    the quadratic coefficients take absolute values so every term is convex,
    and are clipped below at ``a_min`` (set it positive to force strong
    convexity).
    """
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    rng = np.random.default_rng(seed)
    draw = rng.uniform(-scale, scale, size=(4, n))
    a = np.maximum(np.abs(draw[0]), a_min)
    return QuadLogistic(QuadLogisticParams(a, draw[1], draw[2], draw[3]))


class Quadratic(SeparableObjective):
    """f_i(x_i) = curv_i/2 ||x_i - center_i||^2 (tight L_i = sigma_i = curv_i)."""

    def __init__(self, curvature, centers):
        centers = np.asarray(centers, dtype=float)
        if centers.ndim == 1:
            centers = centers[:, None]
        n = centers.shape[0]
        curvature = np.broadcast_to(np.asarray(curvature, dtype=float), (n,)).copy()
        super().__init__(n, centers.shape[1], curvature, curvature)
        self.centers = centers
        self.curvature = curvature

    def node_values(self, idx, xs):
        r = xs - self.centers[idx]
        return 0.5 * self.curvature[idx] * np.sum(r * r, axis=1)

    def node_grads(self, idx, xs):
        return self.curvature[idx][:, None] * (xs - self.centers[idx])

    def node_curvatures(self, idx, xs):
        if self.block_dim != 1:
            return None
        return self.curvature[idx]

    def node_value_diff(self, idx, xs, ds):
        c = self.curvature[idx]
        r = xs - self.centers[idx]
        return c * np.sum(ds * (r + 0.5 * ds), axis=1)

    def scalar_kernel(self):
        if self.block_dim != 1:
            return None
        curv = self.curvature.tolist()
        cen = self.centers[:, 0].tolist()

        def grad(i, x):
            return curv[i] * (x - cen[i])

        def value_diff(i, x, d):
            return curv[i] * d * (x - cen[i] + 0.5 * d)

        return grad, value_diff


class CallableObjective(SeparableObjective):
    """Wraps explicit per-node (f_i, grad_i) handles; evaluation loops over nodes."""

    def __init__(self, funcs, grads, lipschitz, strong_convexity=None, block_dim=1):
        super().__init__(len(funcs), block_dim, lipschitz, strong_convexity)
        self.funcs = list(funcs)
        self.grads = list(grads)

    def node_values(self, idx, xs):
        out = np.empty(len(idx))
        for k, i in enumerate(np.asarray(idx, dtype=int)):
            out[k] = self.funcs[i](xs[k] if self.block_dim > 1 else xs[k, 0])
        return out

    def node_grads(self, idx, xs):
        out = np.empty((len(idx), self.block_dim))
        for k, i in enumerate(np.asarray(idx, dtype=int)):
            out[k] = self.grads[i](xs[k] if self.block_dim > 1 else xs[k, 0])
        return out


class TransformedObjective(SeparableObjective):
    """Objective in rescaled coordinates that turn sum_i alpha_i x_i = b into
    a plain zero-sum constraint (y_i = alpha_i x_i - b/n)."""

    def __init__(self, base, alpha, b):
        alpha = np.asarray(alpha, dtype=float)
        if alpha.shape != (base.n_nodes,):
            raise ValueError(f"alpha must have shape ({base.n_nodes},)")
        if np.any(alpha == 0):
            raise ValueError("all scaling coefficients alpha_i must be nonzero")
        b = np.broadcast_to(np.asarray(b, dtype=float), (base.block_dim,)).copy()
        strong = None
        if base.strong_convexity is not None:
            strong = base.strong_convexity / alpha ** 2
        super().__init__(base.n_nodes, base.block_dim, base.lipschitz / alpha ** 2, strong)
        self.base = base
        self.alpha = alpha
        self.shift = b / base.n_nodes

    def _to_base(self, idx, ys):
        return (ys + self.shift) / self.alpha[idx][:, None]

    def node_values(self, idx, ys):
        return self.base.node_values(idx, self._to_base(idx, ys))

    def node_grads(self, idx, ys):
        return self.base.node_grads(idx, self._to_base(idx, ys)) / self.alpha[idx][:, None]

    def node_value_diff(self, idx, ys, ds):
        return self.base.node_value_diff(
            idx, self._to_base(idx, ys), ds / self.alpha[idx][:, None]
        )

    def to_original(self, y):
        """Map a zero-sum iterate y back to x with sum_i alpha_i x_i = b."""
        y = self.as_state(y)
        return (y + self.shift) / self.alpha[:, None]

    def from_original(self, x):
        x = self.base.as_state(x)
        return self.alpha[:, None] * x - self.shift


def normalize_constraint(alpha, b, obj):
    """Change of coordinates reducing sum_i alpha_i x_i = b to sum_i y_i = 0.

    Returns the transformed objective; its ``to_original`` method is the
    inverse coordinate map. The transformed constants are L_i / alpha_i^2
    and sigma_i / alpha_i^2.
    """
    return TransformedObjective(obj, alpha, b)
