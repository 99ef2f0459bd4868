"""Communication topologies and enumeration of the path sample space."""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Network",
    "PathSet",
    "make_topology",
    "enumerate_paths",
    "is_connected",
]


def _canonical(path):
    """Lexicographically smaller of a vertex tuple and its reversal."""
    rev = path[::-1]
    return path if path <= rev else rev


@dataclass(frozen=True)
class Network:
    """Undirected simple graph on nodes 0..n_nodes-1.

    Edges are stored as a frozenset of sorted pairs. Construction rejects
    self-loops and out-of-range indices; connectivity is a requirement of
    the solver and the distribution design, not of the container, so
    disconnected graphs can be represented (and detected by
    :func:`is_connected`).
    """

    n_nodes: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError(f"need at least 2 nodes, got {self.n_nodes}")
        norm = set()
        for (i, j) in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise ValueError(f"edge ({i},{j}) out of range for {self.n_nodes} nodes")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self):
        """Adjacency lists, each sorted ascending."""
        adj = [[] for _ in range(self.n_nodes)]
        for (i, j) in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def degrees(self):
        return np.array([len(a) for a in self.neighbors()])


@dataclass(frozen=True)
class PathSet:
    """All (or a covering subsample of) simple paths of a fixed vertex count.

    Paths are stored in canonical orientation (lexicographically smaller of
    the tuple and its reversal) so that a path and its reversal, which induce
    the same block update, appear once.
    """

    network: Network
    tau: int
    paths: tuple

    def __post_init__(self):
        n = self.network.n_nodes
        if not (2 <= self.tau <= n):
            raise ValueError(f"tau must be in [2, {n}], got {self.tau}")
        seen = set()
        covered = set()
        for p in self.paths:
            if len(p) != self.tau:
                raise ValueError(f"path {p} does not have {self.tau} vertices")
            if len(set(p)) != len(p):
                raise ValueError(f"path {p} repeats a vertex")
            for a, b in zip(p[:-1], p[1:]):
                if not self.network.has_edge(a, b):
                    raise ValueError(f"path {p} uses missing edge ({a},{b})")
            key = _canonical(p)
            if key in seen:
                raise ValueError(f"duplicate path (up to reversal): {p}")
            seen.add(key)
            covered.update(p)
        if covered != set(range(n)):
            missing = sorted(set(range(n)) - covered)
            raise ValueError(f"paths do not cover nodes {missing}")

    def __len__(self):
        return len(self.paths)

    @property
    def paths_array(self):
        """Paths as an int array of shape (n_paths, tau)."""
        return np.array(self.paths, dtype=np.intp)

    def canonical_keys(self):
        return [_canonical(p) for p in self.paths]


def make_topology(kind, n, edge_prob=None, seed=0):
    """Build one of the standard test topologies.

    Parameters
    ----------
    kind : {'complete', 'ring', 'star', 'random_connected'}
    n : int
        Number of nodes, at least 2.
    edge_prob : float, optional
        Edge probability for ``random_connected``; must lie in (0, 1].
    seed : int, optional
        Seed for ``random_connected``.
    """
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    if kind == "complete":
        edges = {(i, j) for i in range(n) for j in range(i + 1, n)}
    elif kind == "ring":
        edges = {(i, (i + 1) % n) for i in range(n)}
        if n == 2:
            edges = {(0, 1)}
    elif kind == "star":
        edges = {(0, i) for i in range(1, n)}
    elif kind == "random_connected":
        if edge_prob is None or not (0.0 < edge_prob <= 1.0):
            raise ValueError(f"edge_prob must be in (0, 1], got {edge_prob}")
        rng = np.random.default_rng(seed)
        edges = set()
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < edge_prob:
                    edges.add((i, j))
        g = Network(n, frozenset(edges))
        # bridge components with random edges until connected
        while not is_connected(g):
            comp = _components(g)
            a = int(rng.choice(sorted(comp[0])))
            b = int(rng.choice(sorted(comp[1])))
            edges.add((min(a, b), max(a, b)))
            g = Network(n, frozenset(edges))
        return g
    else:
        raise ValueError(f"unknown topology kind {kind!r}")
    return Network(n, frozenset(edges))


def _components(g):
    """Connected components as a list of sets."""
    adj = g.neighbors()
    unseen = set(range(g.n_nodes))
    comps = []
    while unseen:
        root = min(unseen)
        stack = [root]
        comp = {root}
        unseen.discard(root)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in unseen:
                    unseen.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def is_connected(g):
    """True iff the graph has a single connected component."""
    return len(_components(g)) == 1


def enumerate_paths(g, tau, cap=None, seed=0):
    """Enumerate the simple paths of ``tau`` vertices, up to reversal.

    A depth-first search grows simple paths from every start vertex; each
    path is kept only in its canonical orientation. When the full count
    exceeds ``cap``, a seeded uniform subsample of size ``cap`` is drawn and
    patched so every node of the graph stays covered (the patched subsample
    is still deterministic for a fixed seed).

    Parameters
    ----------
    g : Network
    tau : int
        Vertices per path, in [2, n_nodes].
    cap : int, optional
        Maximum number of paths to keep; must be at least n_nodes - 1.
    seed : int, optional
        Seed for the subsampling step, ignored when no cap applies.

    Returns
    -------
    PathSet
    """
    n = g.n_nodes
    if not (2 <= tau <= n):
        raise ValueError(f"tau must be in [2, {n}], got {tau}")
    if cap is not None and cap < n - 1:
        raise ValueError(f"cap {cap} too small to cover all {n} nodes (need >= {n - 1})")

    adj = g.neighbors()
    found = []

    def grow(path, used):
        if len(path) == tau:
            t = tuple(path)
            if t <= t[::-1]:
                found.append(t)
            return
        for w in adj[path[-1]]:
            if w not in used:
                path.append(w)
                used.add(w)
                grow(path, used)
                used.discard(w)
                path.pop()

    for s in range(n):
        grow([s], {s})
    found.sort()

    if not found:
        raise ValueError(f"graph has no simple paths of {tau} vertices")

    if cap is not None and len(found) > cap:
        found = _covering_subsample(found, n, cap, seed)

    return PathSet(g, tau, tuple(found))


def _covering_subsample(paths, n, cap, seed):
    """Uniform subsample of size ``cap`` patched to cover all ``n`` nodes."""
    rng = np.random.default_rng(seed)
    chosen = sorted(rng.choice(len(paths), size=cap, replace=False).tolist())
    chosen_set = set(chosen)

    by_node = {}
    for idx, p in enumerate(paths):
        for v in p:
            by_node.setdefault(v, []).append(idx)

    def covered_count():
        cnt = {}
        for idx in chosen_set:
            for v in paths[idx]:
                cnt[v] = cnt.get(v, 0) + 1
        return cnt

    cnt = covered_count()
    missing = [v for v in range(n) if v not in cnt]
    for v in missing:
        add = int(rng.choice(by_node[v]))
        if add in chosen_set:
            continue
        # drop a path whose removal keeps every node covered
        removable = [
            idx for idx in chosen_set
            if all(cnt[w] > 1 for w in paths[idx])
        ]
        if not removable:
            raise ValueError(f"cap {cap} too small to cover all {n} nodes")
        drop = int(rng.choice(sorted(removable)))
        chosen_set.discard(drop)
        for w in paths[drop]:
            cnt[w] -= 1
        chosen_set.add(add)
        for w in paths[add]:
            cnt[w] = cnt.get(w, 0) + 1
    return [paths[i] for i in sorted(chosen_set)]
