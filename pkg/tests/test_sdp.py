import numpy as np
import pytest

from sumzero.graphs import enumerate_paths, make_topology
from sumzero.probability import dist_inverse_lipschitz, dist_uniform
from sumzero.sdp import (
    assemble_blocks,
    connectivity_heuristic_point,
    export_sdp,
    lmi_matrix,
    read_sdp,
    sdp_variable_layout,
)
from sumzero.spectral import algebraic_connectivity, expected_laplacian


def k3_setup():
    ps = enumerate_paths(make_topology("complete", 3), 2)
    L = np.array([1.0, 2.0, 0.5])
    R = np.array([1.0, 0.5, 2.0])
    return ps, L, R


def heuristic_x(ps, point):
    x = np.concatenate([point["p"], [point["zeta"]], point["nu"]])
    return x


def test_layout_counts():
    ps, _, _ = k3_setup()
    layout = sdp_variable_layout(ps)
    assert layout["n_vars"] == 3 + 1 + 3
    assert layout["block_dims"] == [6, -7, -2]


def test_export_round_trip(tmp_path):
    ps, L, R = k3_setup()
    out = tmp_path / "design.dat-s"
    export_sdp(ps, L, R, str(out))
    data = read_sdp(str(out))
    assert data["n_vars"] == 7
    assert data["block_dims"] == [6, -7, -2]
    assert np.allclose(data["c"], [0, 0, 0, 0, 1.0, 0.25, 4.0])
    # writing the problem again reproduces the identical structure
    assert (tmp_path / "design.dat-s.map.txt").exists()
    export_sdp(ps, L, R, str(tmp_path / "again.dat-s"))
    data2 = read_sdp(str(tmp_path / "again.dat-s"))
    assert data2["n_vars"] == data["n_vars"]
    assert data2["block_dims"] == data["block_dims"]
    assert np.array_equal(data2["c"], data["c"])
    assert data2["entries"] == data["entries"]


def test_heuristic_point_objective_and_feasibility(tmp_path):
    ps, L, R = k3_setup()
    out = tmp_path / "design.dat-s"
    export_sdp(ps, L, R, str(out))
    data = read_sdp(str(out))
    dist = dist_uniform(ps)
    point = connectivity_heuristic_point(dist, L, R)
    lam2 = point["lambda2"]
    assert point["objective"] == pytest.approx(np.sum(R ** 2) / lam2, rel=1e-12)
    x = heuristic_x(ps, point)
    # objective evaluated through the exported file agrees
    assert float(data["c"] @ x) == pytest.approx(point["objective"], rel=1e-10)
    # and the point is feasible for every exported block
    for block in assemble_blocks(data, x):
        assert np.linalg.eigvalsh(block)[0] >= -1e-8


def test_lmi_matrix_matches_exported_blocks(tmp_path):
    ps, L, R = k3_setup()
    out = tmp_path / "design.dat-s"
    export_sdp(ps, L, R, str(out))
    data = read_sdp(str(out))
    rng = np.random.default_rng(0)
    p = rng.random(3)
    p /= p.sum()
    zeta, nu = 0.4, rng.uniform(0.5, 2.0, 3)
    x = np.concatenate([p, [zeta], nu])
    direct = lmi_matrix(ps, L, p, zeta, nu)
    from_file = assemble_blocks(data, x)[0]
    assert np.abs(direct - from_file).max() <= 1e-12


def test_simplex_encoded_as_two_inequalities(tmp_path):
    ps, L, R = k3_setup()
    out = tmp_path / "design.dat-s"
    export_sdp(ps, L, R, str(out))
    data = read_sdp(str(out))
    good = np.concatenate([np.full(3, 1 / 3), [0.1], np.ones(3)])
    bad = np.concatenate([np.full(3, 0.5), [0.1], np.ones(3)])
    last_good = assemble_blocks(data, good)[2]
    last_bad = assemble_blocks(data, bad)[2]
    assert np.linalg.eigvalsh(last_good)[0] >= -1e-12
    assert np.linalg.eigvalsh(last_bad)[0] < -1e-3


def test_export_validates_radii(tmp_path):
    ps, L, _ = k3_setup()
    with pytest.raises(ValueError, match="positive"):
        export_sdp(ps, L, np.array([1.0, -1.0, 1.0]), str(tmp_path / "x.dat-s"))


def test_external_solver_round_trip(tmp_path):
    cvxpy = pytest.importorskip("cvxpy")
    ps, L, R = k3_setup()
    out = tmp_path / "design.dat-s"
    export_sdp(ps, L, R, str(out))
    data = read_sdp(str(out))
    m = data["n_vars"]
    # build the solver's problem from the parsed file alone
    x = cvxpy.Variable(m)
    frob = []
    for b, dim in enumerate(data["block_dims"]):
        size = abs(dim)
        mats = [np.zeros((size, size)) for _ in range(m + 1)]
        for (k, bb, r, c, v) in data["entries"]:
            if bb != b + 1:
                continue
            mats[k][r - 1, c - 1] += v
            if r != c:
                mats[k][c - 1, r - 1] += v
        expr = -mats[0]
        for k in range(1, m + 1):
            expr = expr + x[k - 1] * mats[k]
        frob.append(expr >> 0 if dim > 0 else cvxpy.diag(expr) >= 0)
    problem = cvxpy.Problem(cvxpy.Minimize(data["c"] @ x), frob)
    problem.solve(solver="SCS", eps=1e-7, max_iters=20_000)
    assert problem.status in ("optimal", "optimal_inaccurate")
    sol = np.asarray(x.value)
    # imported solution satisfies the original matrix inequality
    lmi = lmi_matrix(ps, L, sol[:3], sol[3], sol[4:])
    assert np.linalg.eigvalsh(lmi)[0] >= -1e-6
    # and beats (or matches) the connectivity heuristic point
    best_heur = min(
        connectivity_heuristic_point(d, L, R)["objective"]
        for d in (dist_uniform(ps), dist_inverse_lipschitz(ps, L))
    )
    assert float(data["c"] @ sol) <= best_heur + 1e-4
