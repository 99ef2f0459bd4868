import numpy as np
import pytest

from sumzero.graphs import enumerate_paths, make_topology
from sumzero.probability import (
    PathDistribution,
    dist_inverse_lipschitz,
    dist_lipschitz_power,
    dist_uniform,
)
from sumzero.reference import modulus_zeta_scan
from sumzero.spectral import (
    algebraic_connectivity,
    complete_inverse_lipschitz_laplacian,
    design_connectivity,
    design_strong_convexity,
    expected_laplacian,
    path_laplacian,
    simplex_projection,
    strong_convexity_modulus,
)


def test_path_laplacian_pair_unit():
    g = path_laplacian(np.array([1.0, 1.0]), (0, 1))
    assert np.allclose(g, 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-15)


def test_path_laplacian_pair_mixed():
    g = path_laplacian(np.array([1.0, 2.0]), (0, 1))
    third = 1.0 / 3.0
    assert np.allclose(g, [[third, -third], [-third, third]], atol=1e-15)


def test_path_laplacian_kernel_and_psd():
    rng = np.random.default_rng(0)
    for _ in range(30):
        tau = int(rng.integers(2, 6))
        L = rng.uniform(0.1, 10.0, 10)
        path = rng.permutation(10)[:tau]
        g = path_laplacian(L, path)
        assert np.abs(g @ np.ones(tau)).max() <= 1e-12
        assert np.linalg.eigvalsh(g)[0] >= -1e-12


def test_assembled_matches_complete_closed_form():
    rng = np.random.default_rng(1)
    for n, tau in [(4, 2), (5, 3), (6, 4)]:
        L = rng.uniform(0.2, 8.0, n)
        ps = enumerate_paths(make_topology("complete", n), tau)
        gl = expected_laplacian(L, dist_inverse_lipschitz(ps, L))
        ref = complete_inverse_lipschitz_laplacian(L, tau)
        assert np.abs(gl.matrix - ref.matrix).max() <= 1e-12


def test_unit_lipschitz_complete_spectrum():
    n, tau = 7, 4
    ps = enumerate_paths(make_topology("complete", n), tau)
    gl = expected_laplacian(np.ones(n), dist_inverse_lipschitz(ps, np.ones(n)))
    factor = (tau - 1) / (n - 1)
    centering = np.eye(n) - np.ones((n, n)) / n
    assert np.abs(gl.matrix - factor * centering).max() <= 1e-12
    assert algebraic_connectivity(gl) == pytest.approx(factor, abs=1e-12)


def test_full_block_connectivity_is_one():
    n = 5
    ps = enumerate_paths(make_topology("complete", n), n)
    gl = expected_laplacian(np.ones(n), dist_inverse_lipschitz(ps, np.ones(n)))
    assert algebraic_connectivity(gl) == pytest.approx(1.0, abs=1e-12)


def test_laplacian_invariants():
    rng = np.random.default_rng(2)
    for seed in range(3):
        net = make_topology("random_connected", 7, edge_prob=0.45, seed=seed)
        ps = enumerate_paths(net, 3)
        L = rng.uniform(0.3, 5.0, 7)
        gl = expected_laplacian(L, dist_uniform(ps))
        assert np.abs(gl.matrix - gl.matrix.T).max() <= 1e-14
        assert np.abs(gl.matrix.sum(axis=1)).max() <= 1e-10
        assert gl.eigenvalues[0] >= -1e-12
        assert algebraic_connectivity(gl) > 0


def test_assembly_is_linear_in_probabilities():
    ps = enumerate_paths(make_topology("complete", 5), 2)
    L = np.array([1.0, 2.0, 0.5, 4.0, 1.5])
    rng = np.random.default_rng(3)
    p1 = rng.random(len(ps)); p1 /= p1.sum()
    p2 = rng.random(len(ps)); p2 /= p2.sum()
    g1 = expected_laplacian(L, PathDistribution(ps, p1)).matrix
    g2 = expected_laplacian(L, PathDistribution(ps, p2)).matrix
    gm = expected_laplacian(L, PathDistribution(ps, 0.5 * (p1 + p2))).matrix
    assert np.abs(gm - 0.5 * (g1 + g2)).max() <= 1e-12


def test_connectivity_is_concave_along_segments():
    ps = enumerate_paths(make_topology("complete", 6), 2)
    L = np.linspace(0.5, 3.0, 6)
    rng = np.random.default_rng(4)
    for _ in range(20):
        p1 = rng.random(len(ps)); p1 /= p1.sum()
        p2 = rng.random(len(ps)); p2 /= p2.sum()
        th = rng.random()
        lam_mix = algebraic_connectivity(
            expected_laplacian(L, PathDistribution(ps, th * p1 + (1 - th) * p2)))
        lam1 = algebraic_connectivity(expected_laplacian(L, PathDistribution(ps, p1)))
        lam2 = algebraic_connectivity(expected_laplacian(L, PathDistribution(ps, p2)))
        assert lam_mix >= th * lam1 + (1 - th) * lam2 - 1e-9


def test_ridge_shift_equivalence_with_connectivity():
    # G + t 11'/n - t I is PSD exactly for t up to the connectivity
    ps = enumerate_paths(make_topology("ring", 5), 2)
    L = np.array([1.0, 0.5, 2.0, 1.5, 3.0])
    gl = expected_laplacian(L, dist_uniform(ps))
    n = 5
    lam2 = algebraic_connectivity(gl)
    shift = np.ones((n, n)) / n
    for t in np.linspace(0.01 * lam2, 2.0 * lam2, 17):
        m = gl.matrix + t * shift - t * np.eye(n)
        feasible = np.linalg.eigvalsh(m)[0] >= -1e-9
        assert feasible == (t <= lam2 + 1e-9)


def test_spectrum_of_ridge_shifted_matrix():
    ps = enumerate_paths(make_topology("complete", 5), 3)
    L = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    gl = expected_laplacian(L, dist_inverse_lipschitz(ps, L))
    zeta = 0.37
    shifted = np.linalg.eigvalsh(gl.matrix + zeta * np.ones((5, 5)))
    expected = np.sort(np.concatenate([[zeta * 5.0], gl.eigenvalues[1:]]))
    assert np.abs(shifted - expected).max() <= 1e-10


def test_ring3_pair_connectivity_against_dense_eigensolve():
    ps = enumerate_paths(make_topology("ring", 3), 2)
    L = np.ones(3)
    gl = expected_laplacian(L, dist_uniform(ps))
    # brute force: average of the three edge matrices, eigensolve directly
    g = np.zeros((3, 3))
    for (i, j) in [(0, 1), (0, 2), (1, 2)]:
        e = np.zeros(3)
        e[i], e[j] = 1.0, -1.0
        g += np.outer(e, e) / 2.0 / 3.0
    assert np.allclose(gl.matrix, g, atol=1e-15)
    assert algebraic_connectivity(gl) == pytest.approx(np.linalg.eigvalsh(g)[1], abs=1e-12)


def test_disconnected_support_raises_at_assembly():
    # paths {01, 23} touch every node but split the graph in two, leaving a
    # double zero eigenvalue; assembly must refuse such a support
    ps = enumerate_paths(make_topology("complete", 4), 2)
    p = np.array([0.5 if path in ((0, 1), (2, 3)) else 0.0 for path in ps.paths])
    dist = PathDistribution(ps, p)
    with pytest.raises(ValueError, match="connected"):
        expected_laplacian(np.ones(4), dist)


def test_modulus_complete_unit_case():
    n, tau = 6, 3
    ps = enumerate_paths(make_topology("complete", n), tau)
    gl = expected_laplacian(np.ones(n), dist_inverse_lipschitz(ps, np.ones(n)))
    mod = strong_convexity_modulus(gl, np.ones(n))
    assert mod == pytest.approx((tau - 1) / (n - 1), abs=1e-10)


def test_modulus_scales_with_sigma():
    ps = enumerate_paths(make_topology("complete", 5), 2)
    L = np.array([1.0, 2.0, 0.7, 1.4, 3.0])
    gl = expected_laplacian(L, dist_inverse_lipschitz(ps, L))
    sigma = np.array([0.2, 0.4, 0.1, 0.3, 0.25])
    m1 = strong_convexity_modulus(gl, sigma, clamp=False)
    m2 = strong_convexity_modulus(gl, 2.0 * sigma, clamp=False)
    assert m2 == pytest.approx(2.0 * m1, rel=1e-10)


def test_modulus_matches_zeta_grid_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(5):
        n = 3
        L = rng.uniform(0.5, 4.0, n)
        ps = enumerate_paths(make_topology("complete", n), 2)
        p = rng.random(len(ps)); p /= p.sum()
        gl = expected_laplacian(L, PathDistribution(ps, p))
        sigma = rng.uniform(0.1, 1.0, n)
        fast = strong_convexity_modulus(gl, sigma, clamp=False)
        brute = modulus_zeta_scan(gl.matrix, sigma)
        assert abs(fast - brute) <= 1e-6


def test_modulus_clamped_to_unit_interval():
    ps = enumerate_paths(make_topology("complete", 3), 2)
    gl = expected_laplacian(np.ones(3), dist_uniform(ps))
    big = strong_convexity_modulus(gl, np.full(3, 1e6))
    assert big == 1.0


def test_simplex_projection_basics():
    assert np.allclose(simplex_projection(np.array([0.2, 0.5, 0.3])),
                       [0.2, 0.5, 0.3], atol=1e-15)
    p = simplex_projection(np.array([10.0, -3.0, 0.4]))
    assert np.allclose(p, [1.0, 0.0, 0.0], atol=1e-15)
    rng = np.random.default_rng(6)
    for _ in range(50):
        v = rng.standard_normal(12) * 3
        p = simplex_projection(v)
        assert p.min() >= 0
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        # projection optimality: <v - p, q - p> <= 0 for simplex corners
        for j in range(12):
            q = np.zeros(12); q[j] = 1.0
            assert (v - p) @ (q - p) <= 1e-10


def test_design_connectivity_on_symmetric_complete_graph():
    n, tau = 6, 2
    ps = enumerate_paths(make_topology("complete", n), tau)
    designed = design_connectivity(ps, np.ones(n), iters=60)
    lam = algebraic_connectivity(expected_laplacian(np.ones(n), designed))
    target = (tau - 1) / (n - 1)
    assert lam >= target - 1e-6
    assert lam <= target + 1e-6  # uniform is optimal by symmetry
    assert designed.p.min() >= 0
    assert designed.p.sum() == pytest.approx(1.0, abs=1e-12)


def test_design_connectivity_star_beats_heuristics():
    net = make_topology("star", 4)
    ps = enumerate_paths(net, 2)
    L = np.array([4.0, 0.5, 1.0, 2.0])
    designed = design_connectivity(ps, L, iters=200)
    lam_designed = algebraic_connectivity(expected_laplacian(L, designed))
    lam_uniform = algebraic_connectivity(expected_laplacian(L, dist_uniform(ps)))
    lam_inv = algebraic_connectivity(expected_laplacian(L, dist_inverse_lipschitz(ps, L)))
    assert lam_designed >= max(lam_uniform, lam_inv) - 1e-6


def test_design_strong_convexity_symmetric_case():
    n, tau = 5, 2
    ps = enumerate_paths(make_topology("complete", n), tau)
    designed = design_strong_convexity(ps, np.ones(n), np.ones(n), iters=60)
    gl = expected_laplacian(np.ones(n), designed)
    assert strong_convexity_modulus(gl, np.ones(n)) == pytest.approx(
        (tau - 1) / (n - 1), abs=1e-6)
    assert designed.p.min() >= 0
    assert designed.p.sum() == pytest.approx(1.0, abs=1e-12)


def test_design_strong_convexity_dominates_heuristics():
    rng = np.random.default_rng(7)
    for seed in range(4):
        net = make_topology("random_connected", 6, edge_prob=0.5, seed=seed)
        ps = enumerate_paths(net, 2)
        L = rng.uniform(0.3, 5.0, 6)
        sigma = rng.uniform(0.05, 1.0, 6) * L / 5.0
        designed = design_strong_convexity(ps, L, sigma, iters=150)
        mod = strong_convexity_modulus(expected_laplacian(L, designed), sigma)
        for other in (dist_uniform(ps), dist_inverse_lipschitz(ps, L)):
            base = strong_convexity_modulus(expected_laplacian(L, other), sigma)
            assert mod >= base - 1e-6
