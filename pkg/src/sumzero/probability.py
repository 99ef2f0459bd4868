"""Probability distributions over the path sample space."""

from dataclasses import dataclass, field

import numpy as np

from .graphs import PathSet

__all__ = [
    "PathDistribution",
    "CompletePathSampler",
    "dist_uniform",
    "dist_lipschitz_power",
    "dist_inverse_lipschitz",
]


@dataclass
class PathDistribution:
    """Explicit probability vector over an enumerated PathSet.

    Sampling uses the precomputed cumulative vector (inverse-CDF binary
    search). The support must touch every node of the network so that the
    induced update averages over a connected graph.
    """

    pathset: PathSet
    p: np.ndarray
    cdf: np.ndarray = field(init=False)

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if self.p.shape != (len(self.pathset),):
            raise ValueError(f"probability vector must have shape ({len(self.pathset)},)")
        if np.any(self.p < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(self.p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {self.p.sum()!r}, not 1")
        covered = set()
        for path, prob in zip(self.pathset.paths, self.p):
            if prob > 0:
                covered.update(path)
        if covered != set(range(self.pathset.network.n_nodes)):
            missing = sorted(set(range(self.pathset.network.n_nodes)) - covered)
            raise ValueError(f"support does not cover nodes {missing}")
        self.cdf = np.cumsum(self.p)
        self.cdf[-1] = 1.0

    @property
    def tau(self):
        return self.pathset.tau

    @property
    def n_nodes(self):
        return self.pathset.network.n_nodes

    def sample_indices(self, rng, m):
        """m path indices drawn i.i.d. from the distribution."""
        u = rng.random(m)
        return np.searchsorted(self.cdf, u, side="right")

    def sample_batch(self, rng, m):
        """m sampled paths as an int array of shape (m, tau)."""
        return self.pathset.paths_array[self.sample_indices(rng, m)]


def dist_uniform(ps):
    """Uniform probabilities over the path set."""
    m = len(ps)
    return PathDistribution(ps, np.full(m, 1.0 / m))


def dist_lipschitz_power(ps, lipschitz, alpha):
    """Probabilities proportional to sum_{i in path} L_i^alpha.

    alpha = 0 recovers the uniform distribution; alpha = -1 the
    inverse-Lipschitz one.
    """
    L = np.asarray(lipschitz, dtype=float)
    if np.any(L <= 0):
        raise ValueError("all Lipschitz constants must be positive")
    w = (L ** alpha)[ps.paths_array].sum(axis=1)
    return PathDistribution(ps, w / w.sum())


def dist_inverse_lipschitz(ps, lipschitz):
    """Probabilities proportional to sum_{i in path} 1/L_i."""
    return dist_lipschitz_power(ps, lipschitz, -1.0)


class CompletePathSampler:
    """Exact sampler for the L^alpha path families on the complete graph.

    On the complete graph every tau-subset of nodes supports tau!/2 paths,
    all with the same probability, and the block update depends on the
    vertex set only. A path with probability proportional to
    sum_{i in path} L_i^alpha is therefore drawn exactly by picking one
    "anchor" node with probability proportional to L_i^alpha and completing
    it with a uniform (tau-1)-subset of the remaining nodes. This covers
    instances whose path set is far too large to enumerate.
    """

    def __init__(self, n_nodes, tau, lipschitz=None, alpha=0.0):
        if n_nodes < 2:
            raise ValueError(f"need at least 2 nodes, got {n_nodes}")
        if not (2 <= tau <= n_nodes):
            raise ValueError(f"tau must be in [2, {n_nodes}], got {tau}")
        self.n_nodes = int(n_nodes)
        self.tau = int(tau)
        self.alpha = float(alpha)
        if lipschitz is None:
            w = np.ones(self.n_nodes)
        else:
            L = np.asarray(lipschitz, dtype=float)
            if np.any(L <= 0):
                raise ValueError("all Lipschitz constants must be positive")
            w = L ** self.alpha
        self._anchor_cdf = np.cumsum(w / w.sum())
        self._anchor_cdf[-1] = 1.0

    def sample_batch(self, rng, m):
        """m sampled vertex sets as an int array of shape (m, tau)."""
        n, tau = self.n_nodes, self.tau
        anchors = np.searchsorted(self._anchor_cdf, rng.random(m), side="right")
        out = np.empty((m, tau), dtype=np.intp)
        out[:, 0] = anchors
        if tau == 2:
            r = rng.integers(0, n - 1, size=m)
            out[:, 1] = r + (r >= anchors)
        elif tau == n:
            rest = np.broadcast_to(np.arange(n), (m, n))
            mask = rest != anchors[:, None]
            out[:, 1:] = rest[mask].reshape(m, n - 1)
        else:
            # uniform (tau-1)-subset of the other nodes via random keys
            keys = rng.random((m, n))
            keys[np.arange(m), anchors] = 2.0
            out[:, 1:] = np.argpartition(keys, tau - 1, axis=1)[:, : tau - 1]
        return out
