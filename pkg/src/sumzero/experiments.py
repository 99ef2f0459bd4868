"""Experiment harness: config parsing, multi-seed orchestration, CSV traces."""

import concurrent.futures
import os
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - py3.10 path
    import tomli as tomllib

from . import rates, reference
from .feasibility import (
    Ball,
    Box,
    FeasibilityProblem,
    Halfspace,
    dual_objective,
    dual_radius_bound,
    primal_error_bounds,
    recover_primal,
)
from .graphs import enumerate_paths, make_topology
from .objectives import QuadLogistic, QuadLogisticParams, Quadratic, make_quad_logistic
from .probability import (
    CompletePathSampler,
    PathDistribution,
    dist_inverse_lipschitz,
    dist_lipschitz_power,
    dist_uniform,
)
from .sdp import export_sdp
from .solver import run
from .spectral import (
    algebraic_connectivity,
    design_connectivity,
    design_strong_convexity,
    expected_laplacian,
    strong_convexity_modulus,
)

__all__ = [
    "ConfigError",
    "load_config",
    "write_csv",
    "read_csv",
    "write_distribution",
    "read_distribution",
    "run_solve",
    "run_design",
    "run_compare",
    "run_feasibility",
    "run_export_sdp",
]


class ConfigError(Exception):
    """Bad or missing configuration; the CLI maps this to exit code 2."""


def load_config(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}")


def _get(cfg, section, key, types, default=None, required=False, pred=None,
         pred_msg=""):
    table = cfg.get(section, {})
    if key not in table:
        if required:
            raise ConfigError(f"[{section}].{key}: required field missing")
        return default
    val = table[key]
    if not isinstance(val, types):
        names = types.__name__ if isinstance(types, type) else "/".join(t.__name__ for t in types)
        raise ConfigError(f"[{section}].{key}: expected {names}, got {type(val).__name__}")
    if pred is not None and not pred(val):
        raise ConfigError(f"[{section}].{key}: {pred_msg} (got {val!r})")
    return val


# -- CSV traces ------------------------------------------------------------


def write_csv(path, columns, rows, metadata=None):
    """Write a trace CSV atomically, '#'-prefixed metadata lines first."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    lines = []
    for key, val in (metadata or {}).items():
        lines.append(f"# {key} = {val}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(f"{v:.17g}" for v in row))
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_csv(path):
    """Read back a harness CSV: (metadata dict, column list, float array)."""
    meta = {}
    columns = None
    data = []
    with open(path) as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln:
                continue
            if ln.startswith("#"):
                key, _, val = ln[1:].partition("=")
                meta[key.strip()] = val.strip()
            elif columns is None:
                columns = [c.strip() for c in ln.split(",")]
            else:
                data.append([float(t) for t in ln.split(",")])
    return meta, columns, np.asarray(data, dtype=float)


def write_distribution(path, dist):
    """Persist an explicit path distribution; probabilities keep full precision."""
    lines = ["index,path,probability"]
    for j, (p, prob) in enumerate(zip(dist.pathset.paths, dist.p)):
        lines.append(f"{j}," + "-".join(str(v) for v in p) + f",{prob:.17g}")
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_distribution(path, ps):
    with open(path) as fh:
        rows = [ln.strip() for ln in fh if ln.strip()]
    if rows[0] != "index,path,probability":
        raise ValueError(f"{path} is not a distribution file")
    p = np.zeros(len(ps))
    for ln in rows[1:]:
        idx, nodes, prob = ln.split(",")
        j = int(idx)
        expect = "-".join(str(v) for v in ps.paths[j])
        if nodes != expect:
            raise ValueError(f"path mismatch at index {j}: file has {nodes}, set has {expect}")
        p[j] = float(prob)
    return PathDistribution(ps, p)


# -- shared builders --------------------------------------------------------


def build_topology(cfg):
    kind = _get(cfg, "topology", "kind", str, required=True,
                pred=lambda k: k in ("complete", "ring", "star", "random_connected"),
                pred_msg="must be one of complete|ring|star|random_connected")
    n = _get(cfg, "topology", "n", int, required=True, pred=lambda v: v >= 2,
             pred_msg="must be at least 2")
    edge_prob = _get(cfg, "topology", "edge_prob", (int, float))
    seed = _get(cfg, "topology", "seed", int, default=0)
    return make_topology(kind, n, edge_prob=edge_prob, seed=seed)


def build_objective(cfg, n):
    family = _get(cfg, "objective", "family", str, default="quad_logistic",
                  pred=lambda f: f in ("quad_logistic", "quadratic"),
                  pred_msg="must be quad_logistic or quadratic")
    seed = _get(cfg, "objective", "seed", int, default=0)
    if family == "quad_logistic":
        section = cfg.get("objective", {})
        if any(key in section for key in "abcd"):
            # explicit coefficient arrays instead of a seeded draw
            coeffs = []
            for key in "abcd":
                arr = _get(cfg, "objective", key, list, required=True)
                if len(arr) != n or not all(isinstance(v, (int, float)) for v in arr):
                    raise ConfigError(f"[objective].{key}: need {n} numbers")
                coeffs.append(np.asarray(arr, dtype=float))
            try:
                return QuadLogistic(QuadLogisticParams(*coeffs))
            except ValueError as exc:
                raise ConfigError(f"[objective]: {exc}")
        a_min = _get(cfg, "objective", "a_min", (int, float), default=0.0)
        return make_quad_logistic(n, seed=seed, a_min=float(a_min))
    curvature = _get(cfg, "objective", "curvature", (int, float), default=1.0)
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-10.0, 10.0, n)
    centers -= centers.mean()
    return Quadratic(float(curvature), centers)


def build_distribution(cfg, net, obj, tau):
    """The sampler the solver draws paths from.

    Complete graphs with the power-family probabilities use the exact
    enumeration-free sampler; everything else enumerates the path set
    (honoring ``path_cap``) and builds an explicit distribution.
    """
    name = _get(cfg, "run", "distribution", str, default="inverse_lipschitz",
                pred=lambda d: d in ("uniform", "lipschitz_power", "inverse_lipschitz",
                                     "designed_connectivity", "designed_strong_convexity"),
                pred_msg="unknown distribution")
    kind = cfg.get("topology", {}).get("kind")
    alpha = {"uniform": 0.0, "inverse_lipschitz": -1.0}.get(name)
    if name == "lipschitz_power":
        alpha = float(_get(cfg, "run", "alpha", (int, float), required=True))
    if kind == "complete" and alpha is not None and "path_cap" not in cfg.get("topology", {}):
        return CompletePathSampler(net.n_nodes, tau, obj.lipschitz, alpha=alpha)
    cap = _get(cfg, "topology", "path_cap", int)
    ps = enumerate_paths(net, tau, cap=cap, seed=_get(cfg, "topology", "seed", int, default=0))
    if name == "uniform":
        return dist_uniform(ps)
    if name == "inverse_lipschitz":
        return dist_inverse_lipschitz(ps, obj.lipschitz)
    if name == "lipschitz_power":
        return dist_lipschitz_power(ps, obj.lipschitz, alpha)
    iters = _get(cfg, "run", "design_iters", int, default=300)
    if name == "designed_connectivity":
        return design_connectivity(ps, obj.lipschitz, iters=iters)
    if obj.strong_convexity is None or np.any(obj.strong_convexity <= 0):
        raise ConfigError("[run].distribution: designed_strong_convexity needs a strongly convex objective")
    return design_strong_convexity(ps, obj.lipschitz, obj.strong_convexity, iters=iters)


def _seed_list(cfg, override=None):
    if override is not None:
        return list(range(int(override)))
    seeds = _get(cfg, "run", "seeds", (int, list), default=20)
    if isinstance(seeds, int):
        if seeds < 1:
            raise ConfigError("[run].seeds: need at least one seed")
        return list(range(seeds))
    if not all(isinstance(s, int) for s in seeds):
        raise ConfigError("[run].seeds: list entries must be integers")
    return seeds


def _tau_list(cfg, override=None):
    if override is not None:
        taus = override
    else:
        taus = _get(cfg, "run", "tau", (int, list), default=[2])
        if isinstance(taus, int):
            taus = [taus]
    if not all(isinstance(t, int) and t >= 2 for t in taus):
        raise ConfigError("[run].tau: entries must be integers >= 2")
    return taus


def _solve_seed_task(args):
    """Worker-pool task: one seeded run, rebuilt from config primitives."""
    cfg, tau, seed, iterations, trace_stride = args
    net = build_topology(cfg)
    obj = build_objective(cfg, net.n_nodes)
    dist = build_distribution(cfg, net, obj, tau)
    rep = run(obj, dist, np.zeros(net.n_nodes), iterations=iterations,
              seed=seed, trace_stride=trace_stride)
    return seed, rep.trace_k, rep.trace_f


def _map_seeds(task, payloads, workers):
    if workers <= 1:
        return [task(p) for p in payloads]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(task, payloads))


def _progress(quiet, msg):
    if not quiet:
        print(msg, file=sys.stderr)


# -- commands ---------------------------------------------------------------


def run_solve(cfg, out_dir, quiet=False, tau_override=None, seeds_override=None):
    """Multi-seed gap traces per block count, with certificate columns.

    Writes one CSV per (tau, seed) and an aggregate CSV per tau holding the
    mean/min/max gap per recorded iteration together with the level-set and
    complete-graph certificate curves (the latter only when they certify the
    configured topology and distribution).
    """
    os.makedirs(out_dir, exist_ok=True)
    net = build_topology(cfg)
    n = net.n_nodes
    obj = build_objective(cfg, n)
    taus = _tau_list(cfg, tau_override)
    seeds = _seed_list(cfg, seeds_override)
    iterations = _get(cfg, "run", "iterations", int, default=200 * n,
                      pred=lambda v: v >= 1, pred_msg="must be positive")
    workers = _get(cfg, "run", "workers", int, default=1,
                   pred=lambda v: v >= 1, pred_msg="must be positive")
    dist_name = _get(cfg, "run", "distribution", str, default="inverse_lipschitz")

    optimum = reference.optimal_multiplier(obj)
    f_star = optimum[2]
    x0 = np.zeros(n)
    radii = rates.level_set_radii(obj, obj.value(x0), optimum)
    certified = (cfg.get("topology", {}).get("kind") == "complete"
                 and dist_name == "inverse_lipschitz")

    written = []
    for tau in taus:
        stride = _get(cfg, "run", "trace_stride", int, default=0)
        stride = stride if stride > 0 else max(1, round(n / tau))
        _progress(quiet, f"solve: tau={tau}, {len(seeds)} seeds, {iterations} iterations")
        results = _map_seeds(
            _solve_seed_task,
            [(cfg, tau, s, iterations, stride) for s in seeds],
            workers,
        )
        meta = {
            "f_star": f"{f_star:.17g}",
            "tau": tau,
            "n_nodes": n,
            "distribution": dist_name,
            "iterations": iterations,
            "seeds": len(seeds),
        }
        gaps = []
        ks = None
        for seed, tk, tf in results:
            gap = tf - f_star
            ks = tk
            per_seed = os.path.join(out_dir, f"solve_tau{tau}_seed{seed}.csv")
            write_csv(per_seed, ["k", "k_over_n", "gap"],
                      np.column_stack([tk, tk / n, gap]),
                      {**meta, "seed": seed})
            written.append(per_seed)
            gaps.append(gap)
        gaps = np.vstack(gaps)
        with np.errstate(divide="ignore"):
            if certified:
                b_complete = rates.bound_complete_graph(obj.lipschitz, radii, tau, ks)
                b_level = rates.bound_level_set(
                    np.sqrt((n - 1) / (tau - 1) * np.sum(obj.lipschitz * radii ** 2)), ks)
                meta["certificate"] = "complete-graph inverse-Lipschitz"
            else:
                b_complete = np.full(len(ks), np.nan)
                b_level = np.full(len(ks), np.nan)
                meta["certificate"] = "none (topology/distribution not certified)"
        meta["sum_radii_sq"] = f"{float(np.sum(radii ** 2)):.17g}"
        agg = os.path.join(out_dir, f"solve_tau{tau}_mean.csv")
        write_csv(
            agg,
            ["k", "k_over_n", "gap_mean", "gap_min", "gap_max",
             "bound_levelset", "bound_lipschitz"],
            np.column_stack([ks, ks / n, gaps.mean(axis=0), gaps.min(axis=0),
                             gaps.max(axis=0), b_level, b_complete]),
            meta,
        )
        written.append(agg)
    return written


def run_design(cfg, out_dir, quiet=False):
    """Compare the heuristic and optimized path distributions.

    Reports the algebraic connectivity and the strong-convexity modulus of
    every candidate, writes the optimized distribution to a file, and
    optionally exports the full design program in sparse SDPA format.
    """
    os.makedirs(out_dir, exist_ok=True)
    net = build_topology(cfg)
    obj = build_objective(cfg, net.n_nodes)
    tau = _get(cfg, "design", "tau", int, default=2, pred=lambda t: t >= 2,
               pred_msg="must be >= 2")
    cap = _get(cfg, "topology", "path_cap", int)
    ps = enumerate_paths(net, tau, cap=cap, seed=_get(cfg, "topology", "seed", int, default=0))
    L = obj.lipschitz
    sigma = obj.strong_convexity
    have_sigma = sigma is not None and np.all(sigma > 0)
    iters = _get(cfg, "design", "iters", int, default=300)

    candidates = [("uniform", dist_uniform(ps)),
                  ("inverse_lipschitz", dist_inverse_lipschitz(ps, L))]
    for alpha in _get(cfg, "design", "alphas", list, default=[]):
        candidates.append((f"power_{alpha}", dist_lipschitz_power(ps, L, float(alpha))))
    candidates.append(("designed_connectivity", design_connectivity(ps, L, iters=iters)))
    if have_sigma:
        candidates.append(
            ("designed_strong_convexity", design_strong_convexity(ps, L, sigma, iters=iters)))

    rows = []
    names = []
    for name, dist in candidates:
        gl = expected_laplacian(L, dist)
        lam2 = algebraic_connectivity(gl)
        mod = strong_convexity_modulus(gl, sigma) if have_sigma else float("nan")
        rows.append([lam2, mod])
        names.append(name)
        _progress(quiet, f"design: {name}: connectivity={lam2:.6g} modulus={mod:.6g}")

    report = os.path.join(out_dir, "design_report.csv")
    lines = ["name,connectivity,modulus"]
    for name, (lam2, mod) in zip(names, rows):
        lines.append(f"{name},{lam2:.17g},{mod:.17g}")
    tmp = f"{report}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, report)

    designed = dict(candidates)["designed_connectivity"]
    dist_file = os.path.join(out_dir, "designed_connectivity.dist.csv")
    write_distribution(dist_file, designed)

    written = [report, dist_file]
    if _get(cfg, "design", "export_sdp", bool, default=False):
        radii = cfg.get("design", {}).get("radii")
        if radii is None:
            optimum = reference.optimal_multiplier(obj)
            radii = rates.level_set_radii(obj, obj.value(np.zeros(net.n_nodes)), optimum)
        radii = np.asarray(radii, dtype=float)
        sdp_file = os.path.join(out_dir, "design_program.dat-s")
        export_sdp(ps, L, radii, sdp_file)
        written += [sdp_file, sdp_file + ".map.txt"]
    return written


def _center_free_weights(net, l_max):
    """Symmetric degree-based averaging weights, scaled so one step of the
    comparison baseline is a descent step: w_ij = 1/(max(deg_i, deg_j)+1) / (2 L_max)."""
    n = net.n_nodes
    deg = net.degrees()
    w = np.zeros((n, n))
    for (i, j) in net.edges:
        w[i, j] = w[j, i] = 1.0 / (max(deg[i], deg[j]) + 1.0) / (2.0 * l_max)
    return w


def run_compare(cfg, out_dir, quiet=False, seeds_override=None):
    """The four-way comparison: full projected gradient with the global
    constant, the center-free baseline with scaled symmetric weights, and
    the pairwise randomized method under uniform and inverse-Lipschitz
    probabilities. One normalized iteration is one full-gradient step or
    n pairwise updates."""
    os.makedirs(out_dir, exist_ok=True)
    net = build_topology(cfg)
    n = net.n_nodes
    obj = build_objective(cfg, n)
    seeds = _seed_list(cfg, seeds_override)
    full_steps = _get(cfg, "compare", "normalized_iterations", int, default=200,
                      pred=lambda v: v >= 1, pred_msg="must be positive")
    f_star = reference.optimal_multiplier(obj)[2]
    l_max = float(obj.lipschitz.max())
    idx = np.arange(n)

    def full_gradient_trace():
        x = np.zeros((n, 1))
        gaps = [obj.value(x) - f_star]
        for _ in range(full_steps):
            g = obj.node_grads(idx, x)
            x = x + (g.mean(axis=0) - g) / l_max
            gaps.append(obj.value(x) - f_star)
        return np.asarray(gaps)

    def center_free_trace():
        w = _center_free_weights(net, l_max)
        rowsum = w.sum(axis=1)
        x = np.zeros((n, 1))
        gaps = [obj.value(x) - f_star]
        for _ in range(full_steps):
            g = obj.node_grads(idx, x)
            x = x + (w @ g - rowsum[:, None] * g)
            gaps.append(obj.value(x) - f_star)
        return np.asarray(gaps)

    _progress(quiet, f"compare: {full_steps} normalized iterations, {len(seeds)} seeds")
    pg = full_gradient_trace()
    cf = center_free_trace()

    def rcd_mean(alpha):
        acc = np.zeros(full_steps + 1)
        for seed in seeds:
            if cfg.get("topology", {}).get("kind") == "complete":
                dist = CompletePathSampler(n, 2, obj.lipschitz, alpha=alpha)
            else:
                ps = enumerate_paths(net, 2)
                L = obj.lipschitz
                dist = (dist_uniform(ps) if alpha == 0.0
                        else dist_lipschitz_power(ps, L, alpha))
            rep = run(obj, dist, np.zeros(n), iterations=full_steps * n,
                      seed=seed, trace_stride=n)
            acc += rep.trace_f[: full_steps + 1] - f_star
        return acc / len(seeds)

    rcd_uni = rcd_mean(0.0)
    rcd_inv = rcd_mean(-1.0)

    out = os.path.join(out_dir, "compare.csv")
    ks = np.arange(full_steps + 1, dtype=float)
    write_csv(
        out,
        ["k_over_n", "gap_full_gradient", "gap_center_free",
         "gap_pairwise_uniform", "gap_pairwise_inverse_lipschitz"],
        np.column_stack([ks, pg, cf, rcd_uni, rcd_inv]),
        {
            "f_star": f"{f_star:.17g}",
            "n_nodes": n,
            "l_max": f"{l_max:.17g}",
            "seeds": len(seeds),
            "note": "center-free weights are Metropolis scaled by 1/(2 L_max), a baseline choice",
        },
    )
    return [out]


def build_feasibility_problem(cfg):
    """Ball instance with a guaranteed common interior ball, or explicit sets."""
    section = cfg.get("feasibility", {})
    if "sets" in section:
        sets = []
        for j, spec in enumerate(section["sets"]):
            kind = spec.get("kind")
            if kind == "box":
                sets.append(Box(np.asarray(spec["lo"], float), np.asarray(spec["hi"], float)))
            elif kind == "ball":
                sets.append(Ball(np.asarray(spec["center"], float), float(spec["radius"])))
            elif kind == "halfspace":
                sets.append(Halfspace(np.asarray(spec["a"], float), float(spec["b"])))
            else:
                raise ConfigError(f"[feasibility].sets[{j}].kind: unknown kind {kind!r}")
        v0 = np.asarray(_get(cfg, "feasibility", "v0", list, required=True), float)
        weights = section.get("weights")
        return FeasibilityProblem(sets, v0, weights), None, None
    n_sets = _get(cfg, "feasibility", "n_sets", int, default=5,
                  pred=lambda v: v >= 1, pred_msg="must be positive")
    dim = _get(cfg, "feasibility", "dim", int, default=2,
               pred=lambda v: v >= 1, pred_msg="must be positive")
    seed = _get(cfg, "feasibility", "seed", int, default=0)
    margin = float(_get(cfg, "feasibility", "interior_margin", (int, float), default=0.5))
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1.0, 1.0, dim)
    sets = []
    for _ in range(n_sets):
        radius = rng.uniform(2.0, 3.0) * margin
        off = rng.standard_normal(dim)
        off *= rng.uniform(0.0, (radius - margin) / np.linalg.norm(off))
        sets.append(Ball(z + off, radius))
    far = rng.standard_normal(dim)
    v0 = z + 6.0 * margin * far / np.linalg.norm(far)
    return FeasibilityProblem(sets, v0), z, margin


def run_feasibility(cfg, out_dir, quiet=False, seeds_override=None):
    """Primal recovery traces against the certified decay curves.

    The reference projection comes from the Dykstra oracle; emitted columns
    are the recorded iteration, the mean weighted distance to it, its
    certificate, the mean primal value error, and its certificate.
    """
    os.makedirs(out_dir, exist_ok=True)
    prob, z, margin = build_feasibility_problem(cfg)
    n = prob.n_nodes
    seeds = _seed_list(cfg, seeds_override)
    iterations = _get(cfg, "feasibility", "iterations", int, default=5000 * n,
                      pred=lambda v: v >= 1, pred_msg="must be positive")
    tau = _get(cfg, "feasibility", "tau", int, default=2)
    stride = max(1, round(n / tau))

    net = make_topology("complete", n)
    ps = enumerate_paths(net, tau)
    L = prob.dual_lipschitz
    dist = dist_inverse_lipschitz(ps, L)
    gl = expected_laplacian(L, dist)

    v_star = reference.dykstra_projection(prob.sets, prob.v0, tol=1e-12)
    g_star = float(np.sum((v_star - prob.v0) ** 2))
    sigma = prob.primal_strong_convexity
    if z is not None:
        radius = dual_radius_bound(prob, gl, z, margin)
    else:
        radius = float(_get(cfg, "feasibility", "radius_bound", (int, float), required=True,
                            pred=lambda v: v > 0, pred_msg="must be positive"))
    infeas_bound, subopt_bound = primal_error_bounds(
        radius, gl.largest_eigenvalue, float(sigma.min()))

    obj = dual_objective(prob)
    ceiling = float(_get(cfg, "feasibility", "norm_ceiling", (int, float), default=1e8))
    ks = None
    infeas = []
    subopt = []
    _progress(quiet, f"feasibility: {len(seeds)} seeds, {iterations} iterations")
    for seed in seeds:
        rep = run(obj, dist, np.zeros((n, prob.dim)), iterations=iterations,
                  seed=seed, trace_stride=stride, snapshot_stride=stride,
                  abs_ceiling=ceiling)
        kk = np.array([k for k, _ in rep.snapshots])
        inf_row = np.empty(len(kk))
        sub_row = np.empty(len(kk))
        for t, (_, x) in enumerate(rep.snapshots):
            u = recover_primal(prob, x)
            r = u - v_star
            inf_row[t] = float(np.sum(sigma * np.sum(r * r, axis=1)))
            sub_row[t] = abs(prob.primal_value(u) - g_star)
        ks = kk
        infeas.append(inf_row)
        subopt.append(sub_row)
    infeas = np.vstack(infeas).mean(axis=0)
    subopt = np.vstack(subopt).mean(axis=0)
    with np.errstate(divide="ignore"):
        ib = infeas_bound(ks)
        sb = subopt_bound(ks)

    out = os.path.join(out_dir, "feasibility.csv")
    write_csv(
        out,
        ["k", "infeas_mean", "infeas_bound", "subopt_mean", "subopt_bound"],
        np.column_stack([ks, infeas, ib, subopt, sb]),
        {
            "g_star": f"{g_star:.17g}",
            "radius_bound": f"{radius:.17g}",
            "lambda_max": f"{gl.largest_eigenvalue:.17g}",
            "sigma_min": f"{float(sigma.min()):.17g}",
            "lambda2": f"{algebraic_connectivity(gl):.17g}",
            "seeds": len(seeds),
        },
    )
    return [out]


def run_export_sdp(cfg, out_dir, quiet=False):
    """Stand-alone export of the design program for an external solver."""
    os.makedirs(out_dir, exist_ok=True)
    net = build_topology(cfg)
    obj = build_objective(cfg, net.n_nodes)
    tau = _get(cfg, "design", "tau", int, default=2)
    cap = _get(cfg, "topology", "path_cap", int)
    ps = enumerate_paths(net, tau, cap=cap, seed=_get(cfg, "topology", "seed", int, default=0))
    radii = cfg.get("design", {}).get("radii")
    if radii is None:
        optimum = reference.optimal_multiplier(obj)
        radii = rates.level_set_radii(obj, obj.value(np.zeros(net.n_nodes)), optimum)
    radii = np.asarray(radii, dtype=float)
    out = os.path.join(out_dir, "design_program.dat-s")
    export_sdp(ps, obj.lipschitz, radii, out)
    _progress(quiet, f"export-sdp: wrote {out}")
    return [out, out + ".map.txt"]
