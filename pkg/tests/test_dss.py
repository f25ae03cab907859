import numpy as np
import pytest

from rmfact import (
    EvaluationError,
    InputError,
    conjugate,
    evaluate,
    frequency_grid,
    irreducible_realization,
    make_dss,
    mcmillan_degree,
    normal_rank,
    poles,
    polynomial_rank2_discrete,
    random_nonpole_points,
    series,
    stable_rank2_continuous,
    stack_horizontal,
    stack_vertical,
    transpose,
    zeros,
)
from rmfact.dss import identity_system

from support import RELAXED, assert_multiset_close, random_system, rank_deficient_system


def test_example_one_structure():
    g = stable_rank2_continuous()
    assert normal_rank(g) == 2
    assert mcmillan_degree(g) == 4
    pl = poles(g)
    assert_multiset_close(pl.finite, [-1, -1, -2, -2])
    assert pl.infinite_multiplicities == ()
    zl = zeros(g)
    assert_multiset_close(zl.finite, [1, 2])
    assert sum(zl.infinite_multiplicities) == 1


def test_example_one_value_at_origin():
    g = stable_rank2_continuous()
    want = np.array([[-0.5, 0.0, 0.5], [0.0, -2.0, -2.0], [-0.5, -1.0, -0.5]])
    assert np.allclose(evaluate(g, 0.0), want, atol=1e-13)
    # constant rational column dependency: g1 - g2 + g3 = 0
    v = np.array([1.0, -1.0, 1.0])
    for s in (0.3, 1j, 2.5 - 0.4j):
        assert np.linalg.norm(evaluate(g, s) @ v) < 1e-12


def test_example_two_structure():
    g = polynomial_rank2_discrete()
    assert normal_rank(g) == 2
    pl = poles(g)
    assert pl.finite == ()
    assert sum(pl.infinite_multiplicities) == 2
    assert mcmillan_degree(g) == 2
    zl = zeros(g)
    assert_multiset_close(zl.finite, [1])
    assert sum(zl.infinite_multiplicities) == 0


def test_example_two_value():
    g = polynomial_rank2_discrete()
    want = np.array([[7.0, 24.0, 6.0], [2.0, 7.0, 2.0], [4.0, 14.0, 4.0]])
    assert np.allclose(evaluate(g, 2.0), want, atol=1e-12)


def test_evaluate_at_pole_raises():
    g = stable_rank2_continuous()
    with pytest.raises(EvaluationError):
        evaluate(g, -1.0)


def test_conjugate_continuous():
    # G~(s) = G(-s)^T for real realizations
    rng = np.random.default_rng(3)
    g = random_system(rng, ts="continuous")
    gc = conjugate(g)
    for s in random_nonpole_points([g, gc], 8, np.random.default_rng(4)):
        assert np.allclose(evaluate(gc, s), evaluate(g, -s).T, atol=1e-9)


def test_conjugate_discrete():
    # G~(z) = G(1/z)^T
    rng = np.random.default_rng(5)
    g = random_system(rng, ts="discrete", improper_prob=0.0)
    gc = conjugate(g)
    for z in random_nonpole_points([g, gc], 8, np.random.default_rng(6)):
        if abs(z) < 1e-3:
            continue
        assert np.allclose(evaluate(gc, z), evaluate(g, 1.0 / z).T, atol=1e-8)


def test_structural_operations_match_evaluation():
    rng = np.random.default_rng(7)
    for _ in range(5):
        ts = "continuous" if rng.random() < 0.5 else "discrete"
        g1 = random_system(rng, ts=ts, p_max=3, m_max=3)
        g2 = make_dss(
            rng.standard_normal((2, 2)),
            None,
            rng.standard_normal((2, g1.m)),
            rng.standard_normal((g1.p, 2)),
            rng.standard_normal((g1.p, g1.m)),
            ts,
        )
        g3 = make_dss(
            rng.standard_normal((2, 2)),
            None,
            rng.standard_normal((2, g1.p)),
            rng.standard_normal((2, 2)),
            rng.standard_normal((2, g1.p)),
            ts,
        )
        pts = random_nonpole_points([g1, g2, g3], 10, rng)
        for s in pts:
            v1, v2 = evaluate(g1, s), evaluate(g2, s)
            assert np.allclose(evaluate(transpose(g1), s), v1.T, atol=1e-8)
            assert np.allclose(evaluate(stack_vertical(g1, g2), s), np.vstack([v1, v2]), atol=1e-8)
            assert np.allclose(evaluate(stack_horizontal(g1, g2), s), np.hstack([v1, v2]), atol=1e-8)
            assert np.allclose(evaluate(series(g3, g1), s), evaluate(g3, s) @ v1, atol=1e-8)


def test_identity_system_constant():
    g = identity_system(3, "continuous")
    assert g.n == 0
    assert mcmillan_degree(g) == 0
    assert np.allclose(evaluate(g, 1.7j), np.eye(3))


def test_orthogonal_state_similarity_invariance():
    # x -> Q x leaves the transfer function untouched
    rng = np.random.default_rng(11)
    for _ in range(6):
        g = random_system(rng)
        Q = np.linalg.qr(rng.standard_normal((g.n, g.n)))[0]
        h = make_dss(
            Q @ g.A @ Q.T,
            Q @ g.e_matrix @ Q.T,
            Q @ g.B,
            g.C @ Q.T,
            g.D,
            g.ts,
        )
        p0, p1 = poles(g), poles(h)
        assert_multiset_close(p1.finite, p0.finite, tol=1e-6)
        assert sum(p1.infinite_multiplicities) == sum(p0.infinite_multiplicities)
        z0, z1 = zeros(g), zeros(h)
        assert_multiset_close(z1.finite, z0.finite, tol=1e-6)
        assert sum(z1.infinite_multiplicities) == sum(z0.infinite_multiplicities)


def test_irreducible_strips_padding():
    g = stable_rank2_continuous()
    n = g.n
    # append one uncontrollable and one unobservable stable state
    A = np.zeros((n + 2, n + 2))
    A[:n, :n] = g.A
    A[n, n] = -3.0
    A[n + 1, n + 1] = -4.0
    B = np.vstack([g.B, np.zeros((1, 3)), np.ones((1, 3))])
    C = np.hstack([g.C, np.ones((3, 1)), np.zeros((3, 1))])
    padded = make_dss(A, None, B, C, g.D, "continuous")
    red = irreducible_realization(padded)
    assert red.n == n
    for s in (0.5, 1j, -0.3 + 2j):
        assert np.allclose(evaluate(red, s), evaluate(g, s), atol=1e-10)
    assert mcmillan_degree(padded) == n


def test_irreducible_removes_nondynamic_modes():
    # E = 0, A invertible: the state contributes a constant -C A^{-1} B
    g = make_dss(
        np.array([[2.0]]),
        np.array([[0.0]]),
        np.array([[1.0]]),
        np.array([[4.0]]),
        np.array([[1.0]]),
        "continuous",
    )
    red = irreducible_realization(g)
    assert red.n == 0
    assert np.allclose(red.D, [[-1.0]])
    assert np.allclose(evaluate(g, 0.7), [[-1.0]])


def test_normal_rank_of_series_product():
    rng = np.random.default_rng(13)
    for _ in range(4):
        g = rank_deficient_system(rng, inner_dim=1, p=3, m=3)
        assert normal_rank(g, RELAXED) == 1
    g = rank_deficient_system(rng, inner_dim=2, p=4, m=3)
    assert normal_rank(g, RELAXED) == 2


def test_random_nonpole_points_deterministic_and_clear_of_poles():
    g = stable_rank2_continuous()
    pts1 = random_nonpole_points([g], 12, np.random.default_rng(0))
    pts2 = random_nonpole_points([g], 12, np.random.default_rng(0))
    assert pts1 == pts2
    for s in pts1:
        assert min(abs(s - p) for p in (-1.0, -2.0)) > 1e-6
        evaluate(g, s)


def test_frequency_grid_layout():
    cont = frequency_grid("continuous", 16)
    assert len(cont) == 16
    assert all(abs(s.real) == 0.0 for s in cont)
    disc = frequency_grid("discrete", 16)
    assert all(abs(abs(z) - 1.0) < 1e-14 for z in disc)
    assert all(z.imag != 0.0 for z in disc)


def test_make_dss_validation():
    A = np.eye(2)
    with pytest.raises(InputError):
        make_dss(A, None, np.ones((3, 1)), np.ones((1, 2)), np.ones((1, 1)), "continuous")
    with pytest.raises(InputError):
        make_dss(A, np.eye(3), np.ones((2, 1)), np.ones((1, 2)), np.ones((1, 1)), "continuous")
    with pytest.raises(InputError):
        make_dss(A, None, np.ones((2, 1)), np.ones((1, 2)), np.ones((1, 1)), "sampled")
    with pytest.raises(InputError):
        make_dss(np.array([[np.inf, 0], [0, 1]]), None, np.ones((2, 1)), np.ones((1, 2)), np.ones((1, 1)), "continuous")


def test_stacks_require_matching_ts():
    g1 = identity_system(2, "continuous")
    g2 = identity_system(2, "discrete")
    with pytest.raises(InputError):
        stack_vertical(g1, g2)
