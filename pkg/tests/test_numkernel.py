import numpy as np
import pytest

from rmfact.exceptions import InputError, StructureError
from rmfact.numkernel import (
    ToleranceConfig,
    ordered_generalized_schur,
    generalized_eigenvalues,
    pivoted_qr,
    probe_pencil_regular,
    rank_revealing_svd,
)


def test_svd_identity():
    U, s, V, rank = rank_revealing_svd(np.eye(2))
    assert rank == 2
    assert np.allclose(s, [1.0, 1.0])


def test_svd_rank_one_gram():
    # sigma_1^2 = trace(M.T M) = 25 for the rank-1 matrix below
    M = np.array([[1.0, 2.0], [2.0, 4.0]])
    U, s, V, rank = rank_revealing_svd(M)
    assert rank == 1
    assert abs(s[0] - 5.0) < 1e-12
    assert s[1] < 1e-12
    assert np.linalg.norm(U @ np.diag(s) @ V.T - M) < 1e-12


def test_svd_zero_matrix():
    _, _, _, rank = rank_revealing_svd(np.zeros((3, 4)))
    assert rank == 0


def test_svd_rejects_nonfinite():
    with pytest.raises(InputError):
        rank_revealing_svd(np.array([[1.0, np.nan]]))


def test_qr_identity():
    Q, R, perm, rank = pivoted_qr(np.eye(3))
    assert rank == 3
    assert np.allclose(np.abs(np.diag(R)), 1.0)


def test_qr_zero_column_last():
    M = np.hstack([np.eye(3), np.zeros((3, 1))])
    Q, R, perm, rank = pivoted_qr(M)
    assert rank == 3
    assert perm[-1] == 3


def test_qr_reconstruction_random():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((5, 3))
    Q, R, perm, rank = pivoted_qr(M)
    assert rank == 3
    assert np.linalg.norm(Q @ R - M[:, perm]) < 1e-12 * np.linalg.norm(M)
    _, _, _, rank_svd = rank_revealing_svd(M)
    assert rank == rank_svd


def test_ordered_schur_select_leading():
    A = np.diag([1.0, 2.0])
    E = np.eye(2)
    res = ordered_generalized_schur(A, E, lambda a, b: np.abs(a / b) < 1.5)
    lead = res.eigenvalues[0]
    assert abs(lead[0] / lead[1] - 1.0) < 1e-12
    assert np.linalg.norm(res.Q.T @ A @ res.Z - res.S) < 1e-12
    assert np.linalg.norm(res.Q.T @ E @ res.Z - res.T) < 1e-12


def test_ordered_schur_infinite_eigenvalue():
    A = np.eye(2)
    E = np.diag([1.0, 0.0])
    res = ordered_generalized_schur(A, E, lambda a, b: b > 0.5)
    finite = [a / b for a, b in res.eigenvalues if b > 1e-12]
    infinite = [1 for _, b in res.eigenvalues if b <= 1e-12]
    assert len(finite) == 1 and abs(finite[0] - 1.0) < 1e-12
    assert len(infinite) == 1


def test_ordered_schur_hand_eigenvalues():
    # companion matrix of lambda^2 + 3 lambda + 2 = (lambda+1)(lambda+2)
    A = np.array([[0.0, 1.0], [-2.0, -3.0]])
    res = ordered_generalized_schur(A, np.eye(2), lambda a, b: np.zeros_like(np.asarray(a), dtype=bool))
    eigs = sorted((a / b).real for a, b in res.eigenvalues)
    assert np.allclose(eigs, [-2.0, -1.0], atol=1e-12)


def test_ordered_schur_singular_pencil_rejected():
    # A and E share a common column null space, so det(A - lambda E) == 0
    A = np.array([[1.0, 0.0], [1.0, 0.0]])
    E = np.array([[2.0, 0.0], [3.0, 0.0]])
    assert not probe_pencil_regular(A, E)
    with pytest.raises(StructureError):
        ordered_generalized_schur(A, E, lambda a, b: b > 0)


def test_decomposition_invariants_random():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        m = rng.integers(1, 21)
        n = rng.integers(1, 21)
        M = rng.standard_normal((m, n))
        U, s, V, rank = rank_revealing_svd(M)
        assert np.linalg.norm(U.T @ U - np.eye(m)) < 1e-13 * max(1, m)
        assert np.linalg.norm(V.T @ V - np.eye(n)) < 1e-13 * max(1, n)
        S = np.zeros((m, n))
        S[: len(s), : len(s)] = np.diag(s)
        assert np.linalg.norm(U @ S @ V.T - M) < 1e-11 * max(1.0, np.linalg.norm(M))

        Q, R, perm, rank_qr = pivoted_qr(M)
        assert np.linalg.norm(Q.T @ Q - np.eye(m)) < 1e-13 * max(1, m)
        assert np.linalg.norm(Q @ R - M[:, perm]) < 1e-11 * max(1.0, np.linalg.norm(M))
        if s.size and (s[-1] == 0 or s[0] / max(s[-1], 1e-300) < 1e8):
            assert rank_qr == rank


def test_reordering_preserves_eigenvalue_multiset():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = rng.integers(2, 9)
        A = rng.standard_normal((n, n))
        E = rng.standard_normal((n, n))
        base = generalized_eigenvalues(A, E)
        res = ordered_generalized_schur(A, E, lambda a, b: np.abs(a) < np.abs(b))
        for pairs in (base, res.eigenvalues):
            assert all(b >= 0 for _, b in pairs)

        def key(pairs):
            fin = sorted(
                (complex(a / b) for a, b in pairs if b > 1e-9 * abs(a) + 1e-300),
                key=lambda z: (round(z.real, 6), round(z.imag, 6)),
            )
            ninf = sum(1 for a, b in pairs if not b > 1e-9 * abs(a) + 1e-300)
            return fin, ninf

        fin0, inf0 = key(base)
        fin1, inf1 = key(res.eigenvalues)
        assert inf0 == inf1
        assert len(fin0) == len(fin1)
        for z0, z1 in zip(fin0, fin1):
            assert abs(z0 - z1) <= 1e-9 * max(1.0, abs(z0))
