"""Randomized multi-block descent under the zero-sum coupling constraint."""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FEASIBILITY_TOL",
    "direction",
    "SolverState",
    "init_state",
    "step",
    "SolveReport",
    "run",
]

FEASIBILITY_TOL = 1e-9


def _feasibility_gap(x):
    return float(np.abs(x.sum(axis=0)).max())


def _require_feasible(x):
    gap = _feasibility_gap(x)
    scale = 1.0 + float(np.abs(x).max())
    if gap > FEASIBILITY_TOL * scale:
        raise ValueError(
            f"infeasible start: |sum_i x_i| = {gap:.3e} exceeds {FEASIBILITY_TOL:.0e}*(1+max|x_i|);"
            " project the start yourself if that is what you want"
        )


def _direction_block(linv, grads):
    """Update for the touched blocks: d_i = (1/L_i) (m - g_i) with m the
    (1/L)-weighted gradient mean, the minimizer of the local upper model
    over zero-sum steps."""
    mean = (linv @ grads) / linv.sum()
    return linv[:, None] * (mean - grads)


def direction(obj, x, path):
    """Closed-form zero-sum descent direction on one path.

    Returns the sparse update as a dict {node: block update}; blocks off the
    path stay untouched. The update sums to zero across the path and
    minimizes the Lipschitz upper model of the objective over such steps.
    """
    path = np.asarray(path, dtype=int)
    if len(set(path.tolist())) != len(path):
        raise ValueError(f"path {path.tolist()} repeats a vertex")
    if np.any(path < 0) or np.any(path >= obj.n_nodes):
        raise ValueError(f"path {path.tolist()} out of range")
    x = obj.as_state(x)
    grads = obj.node_grads(path, x[path])
    d = _direction_block(1.0 / obj.lipschitz[path], grads)
    return {int(i): d[k].copy() for k, i in enumerate(path)}


@dataclass
class SolverState:
    """Mutable per-run state: the feasible iterate, counters and RNG stream."""

    x: np.ndarray
    k: int
    f_value: float
    rng: np.random.Generator
    trace_k: list = field(default_factory=list)
    trace_f: list = field(default_factory=list)
    trace_stride: int = 1


def init_state(obj, x0, seed=0, trace_stride=1):
    x = obj.as_state(x0).copy()
    _require_feasible(x)
    f0 = obj.value(x)
    state = SolverState(x, 0, f0, np.random.default_rng(seed), [0], [f0], trace_stride)
    return state


def step(state, obj, dist):
    """One iteration: sample a path, apply the closed-form update there.

    The cached objective value moves by the per-node value differences of
    the touched blocks only. Returns the mutated state.
    """
    nodes = dist.sample_batch(state.rng, 1)[0]
    xv = state.x[nodes]
    grads = obj.node_grads(nodes, xv)
    d = _direction_block(1.0 / obj.lipschitz[nodes], grads)
    state.f_value += float(obj.node_value_diff(nodes, xv, d).sum())
    state.x[nodes] = xv + d
    state.k += 1
    if state.k % state.trace_stride == 0:
        state.trace_k.append(state.k)
        state.trace_f.append(state.f_value)
    return state


@dataclass
class SolveReport:
    """Outcome of one run: final iterate, descent trace and run diagnostics.

    ``max_step_increase`` is the largest single-step change of the cached
    objective value (nonpositive up to rounding: the method is a descent
    method, not just one in expectation). ``max_infeasibility`` is the
    largest |sum_i x_i| component seen at any iteration.
    """

    x: np.ndarray
    f_final: float
    iterations: int
    stop_reason: str
    trace_k: np.ndarray
    trace_f: np.ndarray
    max_step_increase: float
    max_infeasibility: float
    max_abs_node: float
    seed: int
    snapshots: list = None

    def gaps(self, f_star):
        return self.trace_f - f_star


def run(obj, dist, x0, *, iterations, seed=0, f_ref=None, gap_tol=None,
        grad_tol=None, trace_stride=None, snapshot_stride=None,
        refresh_every=10_000, batch=8192, use_scalar_kernel=None,
        abs_ceiling=None):
    """Run the randomized block descent method.

    Parameters
    ----------
    obj : SeparableObjective
    dist : PathDistribution or CompletePathSampler
        Where the touched vertex sets come from.
    x0 : ndarray
        Feasible start (its blocks must sum to zero); raising on an
        infeasible start is deliberate, silent projection hides bugs.
    iterations : int
        Hard iteration cap.
    f_ref, gap_tol : float, optional
        Early stop once ``f - f_ref <= gap_tol`` (checked at trace points).
    grad_tol : float, optional
        Early stop once the per-node gradients agree to ``grad_tol`` in the
        max norm (the fixed-point test; checked at trace points).
    trace_stride : int, optional
        Record (k, f) every this many iterations; defaults to one record per
        n_nodes/tau iterations, i.e. per normalized iteration.
    snapshot_stride : int, optional
        Also keep copies of the iterate every this many iterations.
    refresh_every : int
        Recompute the cached objective value from scratch this often to wash
        out incremental rounding drift.
    batch : int
        Paths are presampled in batches of this size.
    use_scalar_kernel : bool, optional
        Force (True) or forbid (False) the plain-float inner loop available
        for scalar objectives; by default it is used whenever the objective
        provides one. Both loops apply the same update; only the order of
        floating point reductions differs.
    abs_ceiling : float, optional
        Divergence watchdog: abort with RuntimeError once any |x_i| exceeds
        this at a trace point (an unbounded-below objective, e.g. the dual
        of an infeasible problem, walks off to infinity).

    Returns
    -------
    SolveReport
    """
    x = obj.as_state(x0).copy()
    _require_feasible(x)
    n, nb = obj.n_nodes, obj.block_dim
    if dist.n_nodes != n:
        raise ValueError(f"distribution is over {dist.n_nodes} nodes, objective has {n}")
    tau = dist.tau
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    if trace_stride is None:
        trace_stride = max(1, round(n / tau))

    rng = np.random.default_rng(seed)
    fval = obj.value(x)
    trace_k, trace_f = [0], [fval]
    snapshots = [(0, x.copy())] if snapshot_stride else None
    max_inc = -np.inf if iterations > 0 else 0.0
    max_infeas = _feasibility_gap(x)
    max_abs = float(np.abs(x).max())
    stop_reason = "max_iters"

    kernel = None
    if nb == 1 and use_scalar_kernel is not False:
        kernel = getattr(obj, "scalar_kernel", lambda: None)()
    if kernel is None and use_scalar_kernel is True:
        raise ValueError("objective provides no scalar kernel")

    def want_stop(fv, xa):
        nonlocal stop_reason
        if abs_ceiling is not None:
            worst = float(np.abs(xa).max())
            if worst > abs_ceiling:
                raise RuntimeError(
                    f"diverging iterate: max|x_i| = {worst:.3e} exceeds the ceiling"
                    f" {abs_ceiling:.3e} (is the problem bounded?)"
                )
        if f_ref is not None and gap_tol is not None and fv - f_ref <= gap_tol:
            stop_reason = "f_gap"
            return True
        if grad_tol is not None:
            g = obj.all_grads(xa)
            if float((g.max(axis=0) - g.min(axis=0)).max()) <= grad_tol:
                stop_reason = "grad_agreement"
                return True
        return False

    k = 0
    if kernel is not None:
        grad_fn, diff_fn = kernel
        xl = x[:, 0].tolist()
        linv = (1.0 / obj.lipschitz).tolist()
        run_sum = float(x.sum())
        done = False
        while k < iterations and not done:
            m = min(batch, iterations - k)
            nodes_batch = dist.sample_batch(rng, m).tolist()
            for nodes in nodes_batch:
                sv = 0.0
                sg = 0.0
                gs = []
                for i in nodes:
                    g = grad_fn(i, xl[i])
                    v = linv[i]
                    gs.append(g)
                    sv += v
                    sg += v * g
                mean = sg / sv
                df = 0.0
                ssum = 0.0
                for g, i in zip(gs, nodes):
                    d = linv[i] * (mean - g)
                    df += diff_fn(i, xl[i], d)
                    xl[i] += d
                    ssum += d
                fval += df
                run_sum += ssum
                k += 1
                if df > max_inc:
                    max_inc = df
                a = run_sum if run_sum >= 0 else -run_sum
                if a > max_infeas:
                    max_infeas = a
                if k % refresh_every == 0:
                    x = np.array(xl)[:, None]
                    fval = obj.value(x)
                    run_sum = float(x.sum())
                    max_abs = max(max_abs, float(np.abs(x).max()))
                if snapshot_stride and k % snapshot_stride == 0:
                    snapshots.append((k, np.array(xl)[:, None]))
                if k % trace_stride == 0 or k == iterations:
                    trace_k.append(k)
                    trace_f.append(fval)
                    if want_stop(fval, np.array(xl)[:, None]):
                        done = True
                        break
        x = np.array(xl)[:, None]
        max_abs = max(max_abs, float(np.abs(x).max()))
    else:
        linv_all = 1.0 / obj.lipschitz
        run_sum = x.sum(axis=0)
        done = False
        while k < iterations and not done:
            m = min(batch, iterations - k)
            nodes_batch = dist.sample_batch(rng, m)
            for t in range(m):
                nodes = nodes_batch[t]
                xv = x[nodes]
                grads = obj.node_grads(nodes, xv)
                linv = linv_all[nodes]
                mean = (linv @ grads) / linv.sum()
                d = linv[:, None] * (mean - grads)
                df = float(obj.node_value_diff(nodes, xv, d).sum())
                x[nodes] = xv + d
                fval += df
                run_sum += d.sum(axis=0)
                k += 1
                if df > max_inc:
                    max_inc = df
                a = float(np.abs(run_sum).max())
                if a > max_infeas:
                    max_infeas = a
                if k % refresh_every == 0:
                    fval = obj.value(x)
                    run_sum = x.sum(axis=0)
                    max_abs = max(max_abs, float(np.abs(x).max()))
                if snapshot_stride and k % snapshot_stride == 0:
                    snapshots.append((k, x.copy()))
                if k % trace_stride == 0 or k == iterations:
                    trace_k.append(k)
                    trace_f.append(fval)
                    if want_stop(fval, x):
                        done = True
                        break
        max_abs = max(max_abs, float(np.abs(x).max()))

    if trace_k[-1] != k:
        trace_k.append(k)
        trace_f.append(fval)
    if snapshot_stride and snapshots[-1][0] != k:
        snapshots.append((k, x.copy()))

    return SolveReport(
        x=x,
        f_final=fval,
        iterations=k,
        stop_reason=stop_reason,
        trace_k=np.asarray(trace_k, dtype=np.intp),
        trace_f=np.asarray(trace_f, dtype=float),
        max_step_increase=float(max_inc),
        max_infeasibility=float(max_infeas),
        max_abs_node=float(max_abs),
        seed=seed,
        snapshots=snapshots,
    )
