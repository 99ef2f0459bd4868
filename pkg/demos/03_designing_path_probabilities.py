#!/usr/bin/env python3
"""Choosing the path probabilities: heuristics, optimized designs, and the
exported semidefinite program.

The expected per-iteration decrease is governed by a weighted Laplacian that
is linear in the path probabilities. Its second-smallest eigenvalue (the
algebraic connectivity) drives the sublinear rate certificate, and a
generalized eigenvalue drives the linear one, so both can be pushed up by
projected supergradient ascent over the simplex.
"""

import os
import tempfile

import numpy as np

import sumzero as sz
from sumzero.sdp import export_sdp, read_sdp

net = sz.make_topology("random_connected", 8, edge_prob=0.45, seed=3)
paths = sz.enumerate_paths(net, tau=2)
print(f"graph with {net.n_nodes} nodes, {len(net.edges)} edges, "
      f"{len(paths)} two-node paths")

obj = sz.make_quad_logistic(8, seed=5, a_min=0.5)
L, sigma = obj.lipschitz, obj.strong_convexity

candidates = {
    "uniform": sz.dist_uniform(paths),
    "inverse-Lipschitz": sz.dist_inverse_lipschitz(paths, L),
    "Lipschitz (alpha=1)": sz.dist_lipschitz_power(paths, L, 1.0),
    "optimized connectivity": sz.design_connectivity(paths, L, iters=300),
    "optimized modulus": sz.design_strong_convexity(paths, L, sigma, iters=300),
}

print(f"\n{'distribution':>24} {'connectivity':>13} {'modulus':>10}")
for name, dist in candidates.items():
    gl = sz.expected_laplacian(L, dist)
    lam2 = sz.algebraic_connectivity(gl)
    mod = sz.strong_convexity_modulus(gl, sigma)
    print(f"{name:>24} {lam2:>13.6f} {mod:>10.6f}")

# the full probability design (minimizing the radius-weighted certificate)
# is a semidefinite program; we export it for an external solver
with tempfile.TemporaryDirectory() as td:
    out = os.path.join(td, "design.dat-s")
    export_sdp(paths, L, np.ones(8), out)
    data = read_sdp(out)
    print(f"\nexported design program: {data['n_vars']} variables, "
          f"blocks {data['block_dims']}, {len(data['entries'])} sparse entries")
    print(f"variable map written next to it: {os.path.basename(out)}.map.txt")
