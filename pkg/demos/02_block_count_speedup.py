#!/usr/bin/env python3
"""How the number of blocks touched per iteration speeds things up.

Updating tau blocks per iteration contracts the expected gap by roughly
(tau-1)/(n-1) per step on a complete graph, so reaching a fixed accuracy
should take about (n-1)/(tau-1) times fewer iterations than with tau = 2.
This script measures that on a quadratic (where the theory is exact) and on
the quadratic-plus-logistic family.
"""

import numpy as np

import sumzero as sz
from sumzero import rates, reference

n = 30
rng = np.random.default_rng(1)
centers = rng.standard_normal(n) * 3.0
centers -= centers.mean()
quad = sz.Quadratic(1.0, centers)

print(f"uniform-curvature quadratic, {n} nodes, target gap 1e-3, 20 seeds")
print(f"{'tau':>4} {'iterations':>11} {'speedup':>8} {'theory':>7}")
needed = {}
for tau in (2, 4, 7, 10):
    sampler = sz.CompletePathSampler(n, tau, quad.lipschitz, alpha=0.0)
    traces = []
    for seed in range(20):
        rep = sz.run(quad, sampler, np.zeros(n), iterations=3000, seed=seed,
                     trace_stride=1)
        traces.append(rep.trace_f)
    mean = np.vstack(traces).mean(axis=0)
    needed[tau] = rates.first_iteration_below(rep.trace_k, mean, 1e-3)
    print(f"{tau:>4} {needed[tau]:>11} {needed[2] / needed[tau]:>8.2f} "
          f"{(tau - 1) / (2 - 1):>7.1f}")

print("\nsame sweep on the quadratic-plus-logistic family:")
obj = sz.make_quad_logistic(50, seed=77)
f_star = reference.optimal_multiplier(obj)[2]
gap0 = obj.value(np.zeros(50)) - f_star
for tau in (2, 4, 7):
    sampler = sz.CompletePathSampler(50, tau, obj.lipschitz, alpha=-1.0)
    traces = []
    for seed in range(20):
        rep = sz.run(obj, sampler, np.zeros(50), iterations=6000, seed=seed,
                     trace_stride=5)
        traces.append(rep.trace_f - f_star)
    mean = np.vstack(traces).mean(axis=0)
    k = rates.first_iteration_below(rep.trace_k, mean, 1e-2 * gap0)
    print(f"  tau = {tau}: mean gap below 1% of the start after {k} iterations")
