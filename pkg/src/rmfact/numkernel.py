"""Dense numerical kernels: rank-revealing decompositions and the
ordered generalized Schur (QZ) decomposition.

Every reduction in this package funnels its rank decisions through the
helpers here so that a single tolerance policy governs the whole
computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import InputError, StructureError

EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerance policy shared by all reductions.

    rank_rtol: relative rank tolerance; 0 means automatic, which
        resolves to max(rows, cols) * machine_epsilon * sigma_max of
        the matrix being ranked.
    eig_atol: absolute tolerance used when classifying generalized
        eigenvalue pairs (e.g. deciding that beta is numerically zero).
    boundary_offset: half-width of the exclusion strip around the
        good/bad region boundary.
    """

    rank_rtol: float = 0.0
    eig_atol: float = 1e-9
    boundary_offset: float = 0.0

    def __post_init__(self):
        if self.rank_rtol < 0 or self.eig_atol < 0 or self.boundary_offset < 0:
            raise InputError("tolerance fields must be nonnegative")

    def resolve(self, sigma_max: float, shape) -> float:
        """Absolute rank threshold for a matrix of the given shape whose
        largest singular value is sigma_max."""
        if self.rank_rtol > 0:
            return self.rank_rtol * sigma_max
        return max(shape) * EPS * sigma_max


DEFAULT_TOL = ToleranceConfig()


def _as_matrix(M, name="matrix"):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2:
        raise InputError(f"{name} must be two-dimensional")
    if M.size and not np.all(np.isfinite(M)):
        raise InputError(f"{name} contains non-finite entries")
    return M


def rank_revealing_svd(M, tol: ToleranceConfig | None = None):
    """Full SVD with a numerical rank decision.

    Returns (U, sigma, V, rank) with M = U @ diag(sigma) @ V.T padded
    to full orthogonal U, V. sigma is descending; rank counts the
    singular values above the resolved tolerance.
    """
    tol = tol or DEFAULT_TOL
    M = _as_matrix(M)
    if min(M.shape) == 0:
        return np.eye(M.shape[0]), np.zeros(0), np.eye(M.shape[1]), 0
    U, s, Vt = scipy.linalg.svd(M)
    thresh = tol.resolve(s[0] if s.size else 0.0, M.shape)
    rank = int(np.count_nonzero(s > thresh))
    return U, s, Vt.T, rank


def pivoted_qr(M, tol: ToleranceConfig | None = None):
    """QR factorization with column pivoting and a rank decision.

    Returns (Q, R, perm, rank) with Q @ R = M[:, perm]; the diagonal
    of R is nonincreasing in magnitude.
    """
    tol = tol or DEFAULT_TOL
    M = _as_matrix(M)
    if min(M.shape) == 0:
        return np.eye(M.shape[0]), np.zeros(M.shape), np.arange(M.shape[1]), 0
    Q, R, perm = scipy.linalg.qr(M, pivoting=True)
    diag = np.abs(np.diag(R))
    scale = diag[0] if diag.size else 0.0
    thresh = tol.resolve(scale, M.shape)
    rank = int(np.count_nonzero(diag > thresh))
    return Q, R, perm, rank


@dataclass(frozen=True)
class OrderedSchurResult:
    """Result of the ordered generalized Schur decomposition.

    S is quasi-upper-triangular, T upper-triangular, and the orthogonal
    Q, Z satisfy Q.T @ A @ Z = S, Q.T @ E @ Z = T. eigenvalues holds
    (alpha, beta) pairs with beta >= 0; beta == 0 encodes an infinite
    eigenvalue.
    """

    S: np.ndarray
    T: np.ndarray
    Q: np.ndarray
    Z: np.ndarray
    eigenvalues: tuple


def probe_pencil_regular(A, E, tol: ToleranceConfig | None = None, attempts: int = 8):
    """Return True when A - lambda*E is numerically regular.

    The pencil is probed at pseudo-random shifts; it is declared
    singular only when every probe is rank-deficient.
    """
    tol = tol or DEFAULT_TOL
    A = _as_matrix(A, "A")
    E = _as_matrix(E, "E")
    n = A.shape[0]
    if n == 0:
        return True
    scale = max(np.linalg.norm(A, "fro"), np.linalg.norm(E, "fro"), 1.0)
    rng = np.random.default_rng(12345)
    for _ in range(attempts):
        lam = rng.standard_normal() + 1j * rng.standard_normal()
        lam *= 1.0 + rng.random()
        smin = np.linalg.svd(A - lam * E, compute_uv=False)[-1]
        if smin > n * EPS * scale * 100:
            return True
    return False


def ordered_generalized_schur(A, E, select, tol: ToleranceConfig | None = None) -> OrderedSchurResult:
    """Ordered real generalized Schur decomposition of a regular pencil.

    select(alpha, beta) marks the eigenvalues that must occupy the
    leading diagonal block; it is called with arrays and must return a
    boolean array (a scalar predicate is lifted elementwise).
    """
    tol = tol or DEFAULT_TOL
    A = _as_matrix(A, "A")
    E = _as_matrix(E, "E")
    if A.shape != E.shape or A.shape[0] != A.shape[1]:
        raise InputError("A and E must be square with equal shape")
    n = A.shape[0]
    if n == 0:
        I = np.eye(0)
        return OrderedSchurResult(I, I, I, I, ())
    if not probe_pencil_regular(A, E, tol):
        raise StructureError(
            "pencil A - lambda*E is numerically singular at every probe shift; "
            "use the Kronecker-like form to separate its singular structure"
        )

    def sort_fn(alpha, beta):
        try:
            out = np.asarray(select(alpha, beta))
            if out.shape == np.shape(alpha):
                return out
        except (TypeError, ValueError):
            pass
        return np.array(
            [bool(select(a, b)) for a, b in zip(np.atleast_1d(alpha), np.atleast_1d(beta))]
        )

    S, T, alpha, beta, Q, Z = scipy.linalg.ordqz(A, E, sort=sort_fn, output="real")
    pairs = []
    for a, b in zip(alpha, beta):
        if b < 0:
            a, b = -a, -b
        pairs.append((complex(a), float(b)))
    return OrderedSchurResult(S, T, Q, Z, tuple(pairs))


def generalized_eigenvalues(A, E):
    """(alpha, beta) pairs of a square pencil via the QZ algorithm,
    with beta normalized nonnegative."""
    A = _as_matrix(A, "A")
    E = _as_matrix(E, "E")
    n = A.shape[0]
    if n == 0:
        return []
    _, _, alpha, beta, _, _ = scipy.linalg.ordqz(A, E, sort=lambda a, b: np.zeros_like(np.asarray(a), dtype=bool), output="real")
    pairs = []
    for a, b in zip(alpha, beta):
        if b < 0:
            a, b = -a, -b
        pairs.append((complex(a), float(b)))
    return pairs


# -- internal compression helpers -------------------------------------------
#
# These are the workhorses of the staircase reductions. They operate with an
# absolute threshold (already resolved against the relevant global scale) so
# that one tolerance governs a whole pencil reduction.


def svd_rank_abs(M, thresh: float) -> int:
    if min(M.shape) == 0:
        return 0
    s = scipy.linalg.svd(M, compute_uv=False)
    return int(np.count_nonzero(s > thresh))


def row_compress(M, thresh: float):
    """Orthogonal U with U.T @ M = [M1; 0], M1 full row rank on top.

    Returns (U, rank).
    """
    m = M.shape[0]
    if min(M.shape) == 0 or not np.any(M):
        return np.eye(m), 0
    U, s, _ = scipy.linalg.svd(M)
    rank = int(np.count_nonzero(s > thresh))
    return U, rank


def col_compress(M, thresh: float, zeros_leading: bool = False):
    """Orthogonal Z compressing the columns of M.

    With zeros_leading=False, M @ Z = [M1, 0] with M1 full column rank;
    otherwise M @ Z = [0, M1]. Returns (Z, rank).
    """
    n = M.shape[1]
    if min(M.shape) == 0 or not np.any(M):
        return np.eye(n), 0
    _, s, Vt = scipy.linalg.svd(M)
    rank = int(np.count_nonzero(s > thresh))
    V = Vt.T
    if zeros_leading:
        Z = np.hstack([V[:, rank:], V[:, :rank]])
    else:
        Z = V
    return Z, rank


def null_basis(M, thresh: float):
    """Orthonormal basis of the right null space of M (columns)."""
    M = np.atleast_2d(M)
    n = M.shape[1]
    if min(M.shape) == 0 or not np.any(M):
        return np.eye(n)
    _, s, Vt = scipy.linalg.svd(M)
    rank = int(np.count_nonzero(s > thresh))
    return Vt[rank:].T.copy()


def orth_basis(M, thresh: float):
    """Orthonormal basis of the column space of M."""
    M = np.atleast_2d(M)
    if min(M.shape) == 0 or not np.any(M):
        return np.zeros((M.shape[0], 0))
    U, s, _ = scipy.linalg.svd(M)
    rank = int(np.count_nonzero(s > thresh))
    return U[:, :rank].copy()
