#!/usr/bin/env python3
"""Projecting a point onto an intersection of convex sets by running the
block descent method on the dual.

Each node owns one set; the dual blocks are multipliers coupled by the
zero-sum constraint, and the conjugate gradient of each node is a projection
onto its set. Every dual iterate therefore yields per-node primal points
inside the sets, whose spread and value error decay at certified rates.
"""

import numpy as np

import sumzero as sz
from sumzero import reference

rng = np.random.default_rng(42)
z = rng.uniform(-1, 1, 2)                     # shared interior point
sets = []
for _ in range(5):
    radius = rng.uniform(1.0, 1.5)
    off = rng.standard_normal(2)
    off *= rng.uniform(0.0, (radius - 0.5) / np.linalg.norm(off))
    sets.append(sz.Ball(z + off, radius))
v0 = z + np.array([4.0, 3.0])
prob = sz.FeasibilityProblem(sets, v0)
print(f"5 balls sharing the interior ball B(z, 0.5); projecting v0 = {v0}")

v_star = reference.dykstra_projection(sets, v0, tol=1e-13)
print(f"reference projection (Dykstra): {v_star}")

paths = sz.enumerate_paths(sz.make_topology("complete", 5), 2)
dist = sz.dist_inverse_lipschitz(paths, prob.dual_lipschitz)
recovery, report = sz.solve_projection(prob, dist, iterations=30_000, seed=0)

print(f"\nafter {report.iterations} dual iterations:")
print(f"  recovered points agree to {np.abs(recovery.u - recovery.u.mean(axis=0)).max():.2e}")
print(f"  distance to the true projection {np.abs(recovery.u - v_star).max():.2e}")
print(f"  every point inside its set (residual {recovery.membership_residual:.1e})")
print(f"  duality diagnostic f(x) + g(u) = {recovery.duality_gap:.2e}")

gl = sz.expected_laplacian(prob.dual_lipschitz, dist)
radius = sz.dual_radius_bound(prob, gl, z, 0.5)
infeas_bound, subopt_bound = sz.primal_error_bounds(
    radius, gl.largest_eigenvalue, float(prob.primal_strong_convexity.min()))
print(f"\ncertified decay from the dual level-set radius {radius:.1f}:")
for k in (100, 1000, 10_000):
    print(f"  k = {k:6d}: weighted distance^2 <= {infeas_bound(k):10.3f}, "
          f"value error <= {subopt_bound(k):10.3f}")
