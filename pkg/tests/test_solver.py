import numpy as np
import pytest

from sumzero.graphs import enumerate_paths, make_topology
from sumzero.objectives import Quadratic, make_quad_logistic
from sumzero.probability import CompletePathSampler, dist_inverse_lipschitz, dist_uniform
from sumzero.reference import expected_decrease_exhaustive, optimal_multiplier, qp_direction
from sumzero.solver import direction, init_state, run, step
from sumzero.spectral import expected_laplacian


def k_pathset(n, tau=2):
    return enumerate_paths(make_topology("complete", n), tau)


def test_direction_two_nodes_symmetric():
    obj = Quadratic(1.0, np.array([-1.0, -3.0]))  # grads at 0: (1, 3)
    d = direction(obj, np.zeros(2), (0, 1))
    assert d[0][0] == pytest.approx(1.0, abs=1e-15)
    assert d[1][0] == pytest.approx(-1.0, abs=1e-15)


def test_direction_zero_when_gradients_agree():
    obj = Quadratic(np.array([1.0, 2.0, 3.0]), np.zeros(3))
    x = np.array([2.0, 1.0, 2.0 / 3.0])  # grads all equal 2
    d = direction(obj, x, (0, 1, 2))
    for v in d.values():
        assert abs(v[0]) <= 1e-15


def test_direction_matches_kkt_oracle_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        tau = int(rng.integers(2, 5))
        curv = rng.uniform(0.1, 10.0, tau)
        centers = rng.standard_normal((tau, 2))
        obj = Quadratic(curv, centers)
        x = rng.standard_normal((tau, 2))
        d = direction(obj, x, tuple(range(tau)))
        grads = obj.all_grads(x)
        ref = qp_direction(curv, grads)
        got = np.vstack([d[i] for i in range(tau)])
        assert np.max(np.abs(got - ref)) <= 1e-10


def test_direction_rejects_bad_paths():
    obj = Quadratic(1.0, np.zeros(4))
    with pytest.raises(ValueError, match="repeats"):
        direction(obj, np.zeros(4), (0, 0, 1))
    with pytest.raises(ValueError, match="range"):
        direction(obj, np.zeros(4), (0, 7))


def test_step_counts_and_descends():
    obj = make_quad_logistic(10, seed=0)
    dist = dist_uniform(k_pathset(10))
    state = init_state(obj, np.zeros(10), seed=1)
    f_prev = state.f_value
    for _ in range(50):
        state = step(state, obj, dist)
        assert state.f_value <= f_prev + 1e-12
        f_prev = state.f_value
    assert state.k == 50


def test_step_at_optimum_only_advances_counter():
    c = np.array([1.0, -2.0, 1.0, 0.0])
    obj = Quadratic(1.0, c)
    dist = dist_uniform(k_pathset(4))
    state = init_state(obj, c.copy(), seed=3)
    x_before = state.x.copy()
    state = step(state, obj, dist)
    assert state.k == 1
    assert np.allclose(state.x, x_before, atol=1e-15)


def test_incremental_value_matches_full_recomputation():
    obj = make_quad_logistic(12, seed=5)
    dist = dist_inverse_lipschitz(k_pathset(12), obj.lipschitz)
    state = init_state(obj, np.zeros(12), seed=7)
    for _ in range(200):
        state = step(state, obj, dist)
    assert state.f_value == pytest.approx(obj.value(state.x), abs=1e-10)


def test_run_quadratic_converges_monotonically():
    rng = np.random.default_rng(11)
    c = rng.standard_normal(9)
    c -= c.mean()
    obj = Quadratic(1.0, c)
    dist = dist_uniform(k_pathset(9))
    rep = run(obj, dist, np.zeros(9), iterations=6000, seed=2)
    assert rep.f_final - 0.0 < 1e-8  # optimum value is 0 at x = c
    assert np.all(np.diff(rep.trace_f) <= 1e-12)
    assert rep.max_step_increase <= 1e-12


def test_run_full_block_equal_l_solves_quadratic_in_one_step():
    rng = np.random.default_rng(13)
    c = rng.standard_normal(6)
    c -= c.mean()
    obj = Quadratic(2.0, c)
    dist = dist_uniform(k_pathset(6, tau=6))
    rep = run(obj, dist, np.zeros(6), iterations=1, seed=0)
    assert np.abs(rep.x[:, 0] - c).max() <= 1e-12


def test_run_deterministic_for_fixed_seed():
    obj = make_quad_logistic(8, seed=1)
    dist = dist_inverse_lipschitz(k_pathset(8), obj.lipschitz)
    r1 = run(obj, dist, np.zeros(8), iterations=500, seed=9)
    r2 = run(obj, dist, np.zeros(8), iterations=500, seed=9)
    assert np.array_equal(r1.trace_f, r2.trace_f)
    assert np.array_equal(r1.x, r2.x)


def test_run_rejects_infeasible_start():
    obj = make_quad_logistic(5, seed=2)
    dist = dist_uniform(k_pathset(5))
    with pytest.raises(ValueError, match="infeasible start"):
        run(obj, dist, np.ones(5), iterations=10)


def test_run_matches_repeated_steps():
    obj = make_quad_logistic(7, seed=3)
    dist = dist_uniform(k_pathset(7))
    rep = run(obj, dist, np.zeros(7), iterations=64, seed=5, batch=1,
              use_scalar_kernel=False, trace_stride=1)
    state = init_state(obj, np.zeros(7), seed=5)
    for _ in range(64):
        state = step(state, obj, dist)
    assert state.f_value == rep.f_final
    assert np.array_equal(state.x, rep.x)


def test_scalar_kernel_and_generic_loop_agree():
    obj = make_quad_logistic(10, seed=4)
    samp = CompletePathSampler(10, 2, obj.lipschitz, alpha=-1.0)
    r1 = run(obj, samp, np.zeros(10), iterations=300, seed=8, use_scalar_kernel=True)
    r2 = run(obj, samp, np.zeros(10), iterations=300, seed=8, use_scalar_kernel=False)
    assert np.allclose(r1.trace_f, r2.trace_f, rtol=1e-9, atol=1e-9)
    assert np.allclose(r1.x, r2.x, atol=1e-9)


def test_feasibility_conserved_along_run():
    obj = make_quad_logistic(40, seed=6)
    samp = CompletePathSampler(40, 3, obj.lipschitz, alpha=-1.0)
    x0 = np.zeros(40)
    rep = run(obj, samp, x0, iterations=30_000, seed=1)
    assert rep.max_infeasibility <= 1e-9 * (1.0 + rep.max_abs_node)
    assert abs(rep.x.sum()) <= 1e-9 * (1.0 + rep.max_abs_node)


def test_gap_stop_and_grad_stop():
    obj = make_quad_logistic(10, seed=8)
    _, _, f_star = optimal_multiplier(obj)
    dist = dist_inverse_lipschitz(k_pathset(10), obj.lipschitz)
    rep = run(obj, dist, np.zeros(10), iterations=200_000, seed=3,
              f_ref=f_star, gap_tol=1e-6, trace_stride=10)
    assert rep.stop_reason == "f_gap"
    assert rep.f_final - f_star <= 1e-6
    rep2 = run(obj, dist, np.zeros(10), iterations=200_000, seed=3,
               grad_tol=1e-5, trace_stride=10)
    assert rep2.stop_reason == "grad_agreement"
    g = obj.all_grads(rep2.x)
    assert float(g.max() - g.min()) <= 1e-5


def test_fixed_point_iff_gradients_agree():
    obj = make_quad_logistic(6, seed=9)
    _, x_star, _ = optimal_multiplier(obj)
    ps = k_pathset(6, tau=3)
    for path in ps.paths:
        d = direction(obj, x_star, path)
        for v in d.values():
            assert abs(v[0]) <= 1e-9
    # and a non-stationary point moves on some path
    x = x_star + np.array([1.0, -1.0, 0, 0, 0, 0])
    moved = any(
        abs(direction(obj, x, path)[path[0]][0]) > 1e-8 for path in ps.paths
    )
    assert moved


def test_expected_decrease_identity_quadratic():
    # with curvature exactly L the per-path model is tight, so the
    # exhaustively enumerated expectation hits f - grad' G grad / 2 exactly
    rng = np.random.default_rng(17)
    n = 5
    curv = rng.uniform(0.5, 4.0, n)
    obj = Quadratic(curv, rng.standard_normal(n))
    ps = k_pathset(n, tau=3)
    dist = dist_inverse_lipschitz(ps, obj.lipschitz)
    gl = expected_laplacian(obj.lipschitz, dist)
    x = rng.standard_normal(n)
    x -= x.mean()
    g = obj.all_grads(x)[:, 0]
    predicted = obj.value(x) - 0.5 * g @ gl.matrix @ g
    assert expected_decrease_exhaustive(obj, x, dist) == pytest.approx(predicted, abs=1e-10)


def test_expected_decrease_inequality_general():
    obj = make_quad_logistic(5, seed=10)
    ps = k_pathset(5, tau=2)
    dist = dist_uniform(ps)
    gl = expected_laplacian(obj.lipschitz, dist)
    rng = np.random.default_rng(19)
    for _ in range(20):
        x = rng.uniform(-5, 5, 5)
        x -= x.mean()
        g = obj.all_grads(x)[:, 0]
        bound = obj.value(x) - 0.5 * g @ gl.matrix @ g
        assert expected_decrease_exhaustive(obj, x, dist) <= bound + 1e-12


def test_trace_stride_defaults_to_normalized_iterations():
    obj = make_quad_logistic(20, seed=12)
    dist = dist_uniform(k_pathset(20))
    rep = run(obj, dist, np.zeros(20), iterations=100, seed=0)
    assert rep.trace_k[1] == 10  # n/tau = 20/2
    assert rep.trace_k[0] == 0 and rep.trace_k[-1] == 100


def test_snapshots_recorded():
    obj = make_quad_logistic(6, seed=13)
    dist = dist_uniform(k_pathset(6))
    rep = run(obj, dist, np.zeros(6), iterations=30, seed=0, snapshot_stride=10)
    ks = [k for k, _ in rep.snapshots]
    assert ks == [0, 10, 20, 30]
    assert all(x.shape == (6, 1) for _, x in rep.snapshots)
