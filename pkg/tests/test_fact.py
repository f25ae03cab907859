import numpy as np
import pytest

from rmfact import (
    FactorizationError,
    conjugate,
    dual_full_rank_factorize,
    evaluate,
    frequency_grid,
    full_rank_factorize,
    inner_outer,
    make_dss,
    mcmillan_degree,
    normal_rank,
    nrcf,
    poles,
    polynomial_rank2_discrete,
    pseudo_inverse,
    random_nonpole_points,
    stable_rank2_continuous,
    zeros,
)
from rmfact.dss import identity_system

from support import (
    assert_multiset_close,
    moore_penrose_defects,
    product_residual,
    random_system,
    zero_pole_balance,
)


def const_sys(D, ts="continuous"):
    D = np.asarray(D, dtype=float)
    p, m = D.shape
    return make_dss(np.zeros((0, 0)), None, np.zeros((0, m)), np.zeros((p, 0)), D, ts)


def scalar_sys(a, b, c, d, ts="continuous"):
    return make_dss(
        np.array([[float(a)]]), None, np.array([[float(b)]]),
        np.array([[float(c)]]), np.array([[float(d)]]), ts,
    )


def inner_defect(R, ts, count=32):
    worst = 0.0
    for s in frequency_grid(ts, count):
        v = evaluate(R, s)
        worst = max(worst, np.linalg.norm(v.conj().T @ v - np.eye(v.shape[1])))
    return worst


# -- full-rank factorization ----------------------------------------------------


def test_frf_constant_rank_one():
    G = np.array([[3.0, 4.0], [6.0, 8.0]])
    fr = full_rank_factorize(const_sys(G))
    assert fr.kind == "full-rank"
    assert fr.certificates["rank"] == 1
    assert fr.left.m == 1 and fr.right.p == 1
    assert np.linalg.norm(evaluate(fr.left, 0.3) @ evaluate(fr.right, 0.3) - G) < 1e-12
    # the factored column space agrees with the dominant singular vector
    u = np.linalg.svd(G)[0][:, :1]
    lv = evaluate(fr.left, 0.3).real
    lv = lv / np.linalg.norm(lv)
    assert min(np.linalg.norm(lv - u), np.linalg.norm(lv + u)) < 1e-12


def test_frf_zero_matrix():
    fr = full_rank_factorize(const_sys(np.zeros((2, 3))))
    assert fr.certificates["rank"] == 0
    assert fr.left.m == 0 and fr.right.p == 0
    assert np.allclose(evaluate(fr.left, 1.0) @ evaluate(fr.right, 1.0), np.zeros((2, 3)))


def test_frf_example_one():
    g = stable_rank2_continuous()
    fr = full_rank_factorize(g)
    assert fr.certificates["rank"] == 2
    assert mcmillan_degree(fr.left) == 3
    assert_multiset_close(zeros(fr.left).finite, [1, 2])
    assert fr.certificates["max_relative_residual"] <= 1e-8
    pts = random_nonpole_points([g, fr.left, fr.right], 12, np.random.default_rng(5))
    assert product_residual(g, fr.left, fr.right, pts) <= 1e-9


def test_dual_factorization():
    g = stable_rank2_continuous()
    fr = dual_full_rank_factorize(g)
    assert fr.kind == "dual"
    # the right factor is a two-row basis of the row space
    assert fr.right.p == 2
    assert normal_rank(fr.right) == 2
    assert fr.certificates["max_relative_residual"] <= 1e-8
    # dual of the transpose matches the primal of the original
    ft = full_rank_factorize(g)
    assert_multiset_close(
        zeros(fr.right).finite, zeros(ft.left).finite, tol=1e-8
    )


# -- normalized right coprime factorization --------------------------------------


def test_nrcf_scalar_unstable():
    # G = 1/(s-1); the normalized factors share the pole pair at -sqrt(2)
    g = scalar_sys(1.0, 1.0, 1.0, 0.0)
    N, M = nrcf(g)
    assert_multiset_close(poles(N).finite, [-np.sqrt(2.0)], tol=1e-8)
    assert_multiset_close(poles(M).finite, [-np.sqrt(2.0)], tol=1e-8)
    assert_multiset_close(zeros(M).finite, [1.0], tol=1e-8)
    worst = 0.0
    for s in frequency_grid("continuous", 32):
        nv, mv = evaluate(N, s), evaluate(M, s)
        worst = max(worst, abs(nv.conj().T @ nv + mv.conj().T @ mv - 1.0).max())
    assert worst <= 1e-8
    v = evaluate(N, 2.0) / evaluate(M, 2.0)
    assert abs(v - 1.0) < 1e-8


def test_nrcf_example_one():
    g = stable_rank2_continuous()
    N, M = nrcf(g)
    worst_id = 0.0
    for s in frequency_grid("continuous", 32):
        nv, mv = evaluate(N, s), evaluate(M, s)
        worst_id = max(
            worst_id,
            np.linalg.norm(nv.conj().T @ nv + mv.conj().T @ mv - np.eye(3)),
        )
    assert worst_id <= 1e-8
    for lam in list(poles(N).finite) + list(poles(M).finite):
        assert lam.real < 0
    # reconstruction away from the axis
    for s in (1.0 + 1j, 3.0, 0.5 - 2j):
        assert np.linalg.norm(
            evaluate(g, s) - evaluate(N, s) @ np.linalg.inv(evaluate(M, s))
        ) < 1e-9
    # coprimeness: the stacked factor keeps full column rank at bad points
    rng = np.random.default_rng(9)
    for _ in range(10):
        s = complex(abs(rng.standard_normal()) + 0.1, rng.standard_normal())
        st = np.vstack([evaluate(N, s), evaluate(M, s)])
        assert np.linalg.matrix_rank(st, tol=1e-8) == 3


def test_nrcf_zero_scalar():
    N, M = nrcf(const_sys([[0.0]]))
    assert abs(evaluate(N, 1.7j)) < 1e-12
    assert abs(abs(evaluate(M, 1.7j)) - 1.0) < 1e-12


def test_nrcf_boundary_pole_rejected():
    with pytest.raises(FactorizationError):
        nrcf(scalar_sys(0.0, 1.0, 1.0, 0.0))
    with pytest.raises(FactorizationError):
        nrcf(scalar_sys(1.0, 1.0, 1.0, 0.0, ts="discrete"))


# -- Moore-Penrose pseudo-inverse -------------------------------------------------


def test_pinv_constant_matches_svd():
    G = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 1.0]])
    gp = pseudo_inverse(const_sys(G))
    want = np.linalg.pinv(G)
    assert np.linalg.norm(evaluate(gp, 0.9j) - want) < 1e-10


def test_pinv_zero_matrix():
    gp = pseudo_inverse(const_sys(np.zeros((2, 3))))
    assert gp.p == 3 and gp.m == 2
    assert np.allclose(evaluate(gp, 1.0), np.zeros((3, 2)))


def test_pinv_square_invertible_is_inverse():
    rng = np.random.default_rng(23)
    g = make_dss(
        np.diag([-1.0, -3.0]), None,
        rng.standard_normal((2, 2)),
        rng.standard_normal((2, 2)),
        np.eye(2) * 2.0 + 0.1 * rng.standard_normal((2, 2)),
        "continuous",
    )
    gp = pseudo_inverse(g)
    for s in random_nonpole_points([g, gp], 6, np.random.default_rng(3)):
        assert np.linalg.norm(evaluate(g, s) @ evaluate(gp, s) - np.eye(2)) < 1e-8


def test_pinv_full_column_rank_left_inverse():
    g = make_dss(
        np.array([[-2.0]]), None, np.array([[1.0, 0.5]]),
        np.array([[1.0], [0.0]]), np.array([[0.0, 1.0], [1.0, 0.3]]), "continuous",
    )
    assert normal_rank(g) == 2
    gp = pseudo_inverse(g)
    for s in random_nonpole_points([g, gp], 6, np.random.default_rng(8)):
        assert np.linalg.norm(evaluate(gp, s) @ evaluate(g, s) - np.eye(2)) < 1e-8



def test_pinv_identities_example_one():
    g = stable_rank2_continuous()
    gp = pseudo_inverse(g)
    prod, herm = moore_penrose_defects(g, gp, np.random.default_rng(31))
    assert prod <= 1e-7
    assert herm <= 1e-6


def test_pinv_identities_example_two():
    g = polynomial_rank2_discrete()
    gp = pseudo_inverse(g)
    prod, herm = moore_penrose_defects(g, gp, np.random.default_rng(32))
    assert prod <= 1e-7
    assert herm <= 1e-6


# -- inner-quasi-outer factorization ----------------------------------------------


def test_inner_outer_example_one():
    g = stable_rank2_continuous()
    Gi, Go = inner_outer(g)
    assert_multiset_close(poles(Gi).finite, [-1.0, -np.sqrt(3.0), -2.0], tol=1e-6)
    assert_multiset_close(zeros(Gi).finite, [1.0, 2.0], tol=1e-6)
    assert inner_defect(Gi, "continuous") <= 1e-8
    # quasi-outer: every finite zero of Go lies in the closed left half-plane
    for lam in zeros(Go).finite:
        assert lam.real <= 1e-8
    pts = random_nonpole_points([g, Gi, Go], 12, np.random.default_rng(12))
    assert product_residual(g, Gi, Go, pts) <= 1e-8


def test_inner_outer_example_two():
    g = polynomial_rank2_discrete()
    Gi, Go = inner_outer(g)
    assert mcmillan_degree(Gi) == 1
    assert_multiset_close(poles(Gi).finite, [0.0], tol=1e-6)
    assert inner_defect(Gi, "discrete") <= 1e-8
    assert_multiset_close(zeros(Go).finite, [0.0, 1.0], tol=1e-6)
    pts = random_nonpole_points([g, Gi, Go], 12, np.random.default_rng(13))
    assert product_residual(g, Gi, Go, pts) <= 1e-8


def test_inner_outer_already_inner():
    g = polynomial_rank2_discrete()
    Gi, _ = inner_outer(g)
    Gi2, Go2 = inner_outer(Gi)
    # an inner input reproduces itself up to a constant orthogonal factor
    assert mcmillan_degree(Go2) == 0
    q = evaluate(Go2, 0.5).real
    assert np.linalg.norm(q.T @ q - np.eye(q.shape[1])) < 1e-10
    pts = random_nonpole_points([Gi, Gi2, Go2], 8, np.random.default_rng(14))
    assert product_residual(Gi, Gi2, Go2, pts) <= 1e-8



def test_inner_outer_zero_pole_balance():
    g1 = stable_rank2_continuous()
    zero_pole_balance(g1, *inner_outer(g1))
    g2 = polynomial_rank2_discrete()
    zero_pole_balance(g2, *inner_outer(g2))


def test_certificates_fields():
    fr = full_rank_factorize(stable_rank2_continuous())
    cert = fr.certificates
    for key in (
        "rank",
        "grid_points",
        "max_relative_residual",
        "mean_relative_residual",
        "left_poles",
        "left_zeros",
        "right_poles",
        "right_zeros",
    ):
        assert key in cert
    assert cert["left_order"] == fr.left.n
    assert len(cert["left_zeros"].finite) == 2
