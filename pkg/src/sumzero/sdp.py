"""Sparse SDPA export of the probability-design semidefinite program.

The program picks path probabilities minimizing <nu, R^2> subject to

    [ G(p) + zeta 11^T   I  ]
    [        I         D_nu ]  >= 0,    p in the simplex, zeta >= 0, nu >= 0,

with G(p) the expected decrease matrix, linear in p. Interior-point codes
read the .dat-s file; this module only writes, re-reads and evaluates it.
"""

import os

import numpy as np

from .spectral import path_laplacian, expected_laplacian, algebraic_connectivity

__all__ = [
    "sdp_variable_layout",
    "export_sdp",
    "read_sdp",
    "assemble_blocks",
    "lmi_matrix",
    "connectivity_heuristic_point",
]


def sdp_variable_layout(ps):
    """Variable ordering of the exported file: path probabilities, then the
    ridge shift, then the per-node weights."""
    m = len(ps)
    n = ps.network.n_nodes
    return {
        "n_vars": m + 1 + n,
        "prob_vars": list(range(1, m + 1)),
        "ridge_var": m + 1,
        "weight_vars": list(range(m + 2, m + 1 + n + 1)),
        "block_dims": [2 * n, -(m + 1 + n), -2],
    }


def _entries(ps, lipschitz, radii):
    """All nonzero upper-triangle entries as (var, block, row, col, value)."""
    n = ps.network.n_nodes
    m = len(ps)
    ent = []
    # constant side: -F0 must contribute the off-diagonal identities of the
    # LMI block and the two simplex right-hand sides
    for i in range(1, n + 1):
        ent.append((0, 1, i, n + i, -1.0))
    ent.append((0, 3, 1, 1, 1.0))
    ent.append((0, 3, 2, 2, -1.0))
    # path probability variables
    for j, path in enumerate(ps.paths):
        g = path_laplacian(lipschitz, path)
        for a in range(len(path)):
            for b in range(a, len(path)):
                r, c = path[a] + 1, path[b] + 1
                if r > c:
                    r, c = c, r
                v = g[a, b]
                if v != 0.0:
                    ent.append((j + 1, 1, r, c, v))
        ent.append((j + 1, 2, j + 1, j + 1, 1.0))
        ent.append((j + 1, 3, 1, 1, 1.0))
        ent.append((j + 1, 3, 2, 2, -1.0))
    # ridge shift variable: the all-ones matrix on the first diagonal block
    k = m + 1
    for r in range(1, n + 1):
        for c in range(r, n + 1):
            ent.append((k, 1, r, c, 1.0))
    ent.append((k, 2, k, k, 1.0))
    # per-node weight variables
    for i in range(1, n + 1):
        k = m + 1 + i
        ent.append((k, 1, n + i, n + i, 1.0))
        ent.append((k, 2, k, k, 1.0))
    return ent


def export_sdp(ps, lipschitz, radii, path):
    """Write the design program in sparse SDPA format (.dat-s).

    A sidecar ``<path>.map.txt`` documents the variable ordering and block
    structure. Block 1 is the 2n x 2n matrix inequality; block 2 holds the
    nonnegativity of every scalar variable; block 3 encodes the simplex
    equality as two opposite inequalities.
    """
    radii = np.asarray(radii, dtype=float)
    n = ps.network.n_nodes
    if radii.shape != (n,) or np.any(radii <= 0):
        raise ValueError(f"radii must be {n} positive reals")
    layout = sdp_variable_layout(ps)
    c = np.zeros(layout["n_vars"])
    c[len(ps) + 1:] = radii ** 2

    lines = ['* path-probability design, sparse SDPA format']
    lines.append(f'* see {os.path.basename(path)}.map.txt for the variable map')
    lines.append(str(layout["n_vars"]))
    lines.append(str(len(layout["block_dims"])))
    lines.append(" ".join(str(d) for d in layout["block_dims"]))
    lines.append(" ".join(f"{v:.17g}" for v in c))
    for (k, b, r, cc, v) in _entries(ps, lipschitz, radii):
        lines.append(f"{k} {b} {r} {cc} {v:.17g}")
    text = "\n".join(lines) + "\n"

    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)

    map_lines = [
        f"variables 1..{len(ps)}: path probabilities",
        f"variable {layout['ridge_var']}: ridge shift on the ones direction",
        (f"variables {layout['weight_vars'][0]}..{layout['weight_vars'][-1]}: "
         "per-node weights, objective coefficients R_i^2"),
        f"block 1 (size {2 * n}): [G(p) + ridge*ones, I; I, diag(weights)] >= 0",
        f"block 2 (diagonal, size {len(ps) + 1 + n}): all variables nonnegative",
        "block 3 (diagonal, size 2): sum of path probabilities == 1, as two inequalities",
    ]
    for j, p in enumerate(ps.paths):
        map_lines.append(f"path {j + 1}: " + "-".join(str(v) for v in p))
    tmp = f"{path}.map.txt.tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(map_lines) + "\n")
    os.replace(tmp, f"{path}.map.txt")


def read_sdp(path):
    """Parse a sparse SDPA file back into its structure.

    Returns a dict with n_vars, block_dims, c and the sorted entry list;
    files written by :func:`export_sdp` survive the round trip unchanged.
    """
    with open(path) as fh:
        raw = [ln.strip() for ln in fh]
    rows = [ln for ln in raw if ln and ln[0] not in '*"']
    n_vars = int(rows[0])
    n_blocks = int(rows[1])
    dims = [int(t) for t in rows[2].replace(",", " ").replace("{", " ")
            .replace("}", " ").replace("(", " ").replace(")", " ").split()]
    if len(dims) != n_blocks:
        raise ValueError(f"block dimension line has {len(dims)} entries, expected {n_blocks}")
    c = np.array([float(t) for t in rows[3].replace(",", " ").split()])
    if c.shape != (n_vars,):
        raise ValueError(f"objective line has {c.shape[0]} entries, expected {n_vars}")
    entries = []
    for ln in rows[4:]:
        t = ln.split()
        entries.append((int(t[0]), int(t[1]), int(t[2]), int(t[3]), float(t[4])))
    return {
        "n_vars": n_vars,
        "block_dims": dims,
        "c": c,
        "entries": sorted(entries),
    }


def assemble_blocks(data, x):
    """Evaluate sum_k x_k F_k - F0 for every block of a parsed file.

    Feasibility of a candidate x means every returned matrix is positive
    semidefinite (diagonal blocks included, returned dense).
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (data["n_vars"],):
        raise ValueError(f"x must have shape ({data['n_vars']},)")
    blocks = [np.zeros((abs(d), abs(d))) for d in data["block_dims"]]
    for (k, b, r, c, v) in data["entries"]:
        w = -v if k == 0 else x[k - 1] * v
        blocks[b - 1][r - 1, c - 1] += w
        if r != c:
            blocks[b - 1][c - 1, r - 1] += w
    return blocks


def lmi_matrix(ps, lipschitz, p, zeta, nu):
    """The 2n x 2n design matrix inequality evaluated at (p, zeta, nu)."""
    n = ps.network.n_nodes
    p = np.asarray(p, dtype=float)
    nu = np.asarray(nu, dtype=float)
    g = np.zeros((n, n))
    for w, path in zip(p, ps.paths):
        if w == 0.0:
            continue
        idx = np.asarray(path, dtype=int)
        g[np.ix_(idx, idx)] += w * path_laplacian(lipschitz, path)
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = g + zeta * np.ones((n, n))
    out[:n, n:] = np.eye(n)
    out[n:, :n] = np.eye(n)
    out[n:, n:] = np.diag(nu)
    return out


def connectivity_heuristic_point(dist, lipschitz, radii):
    """Feasible design point built from the algebraic connectivity t:
    ridge t/n, all weights 1/t, objective sum_i R_i^2 / t."""
    gl = expected_laplacian(lipschitz, dist)
    t = algebraic_connectivity(gl)
    n = dist.n_nodes
    radii = np.asarray(radii, dtype=float)
    nu = np.full(n, 1.0 / t)
    return {
        "p": dist.p.copy(),
        "zeta": t / n,
        "nu": nu,
        "objective": float(np.sum(radii ** 2) / t),
        "lambda2": t,
    }
