"""Descriptor state-space representations of rational matrices.

A rational p x m matrix G(lambda) is represented by the quintuple
(A - lambda*E, B, C, D) with G(lambda) = C (lambda*E - A)^{-1} B + D.
E may be singular, which lets the same data structure carry improper
(polynomial) matrices. The frequency variable is the Laplace variable
for continuous-time systems and the Z-transform variable for
discrete-time systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import EvaluationError, InputError, StructureError
from .numkernel import (
    DEFAULT_TOL,
    EPS,
    ToleranceConfig,
    generalized_eigenvalues,
    orth_basis,
    probe_pencil_regular,
    rank_revealing_svd,
)

CONTINUOUS = "continuous"
DISCRETE = "discrete"


def _matrix(value, rows, cols, name):
    M = np.asarray(value, dtype=float)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim == 1:
        raise InputError(f"{name} must be two-dimensional, got shape {M.shape}")
    if M.shape != (rows, cols):
        raise InputError(f"{name} must have shape {(rows, cols)}, got {M.shape}")
    if M.size and not np.all(np.isfinite(M)):
        raise InputError(f"{name} contains non-finite entries")
    return M


@dataclass(frozen=True)
class DescriptorSystem:
    """Immutable descriptor realization (A - lambda*E, B, C, D) with a
    time-domain tag. E stored as None denotes the identity."""

    A: np.ndarray
    E: np.ndarray | None
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    ts: str

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def e_matrix(self) -> np.ndarray:
        return np.eye(self.n) if self.E is None else self.E

    def require_regular(self, tol: ToleranceConfig | None = None):
        if self.E is not None and not probe_pencil_regular(self.A, self.E, tol):
            raise StructureError("pencil A - lambda*E is numerically singular")


def make_dss(A, E, B, C, D, ts: str) -> DescriptorSystem:
    """Validate and build a DescriptorSystem. E may be None (identity)."""
    if ts not in (CONTINUOUS, DISCRETE):
        raise InputError(f"ts must be '{CONTINUOUS}' or '{DISCRETE}', got {ts!r}")
    A = np.asarray(A, dtype=float)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"A must be square, got shape {A.shape}")
    n = A.shape[0]
    A = _matrix(A, n, n, "A")
    B = np.asarray(B, dtype=float)
    if B.ndim == 0:
        B = B.reshape(1, 1)
    if B.ndim != 2:
        raise InputError("B must be two-dimensional")
    if B.shape[0] != n:
        raise InputError(f"B must have {n} rows, got {B.shape[0]}")
    m = B.shape[1]
    B = _matrix(B, n, m, "B")
    C = np.asarray(C, dtype=float)
    if C.ndim == 0:
        C = C.reshape(1, 1)
    if C.ndim != 2:
        raise InputError("C must be two-dimensional")
    if C.shape[1] != n:
        raise InputError(f"C must have {n} columns, got {C.shape[1]}")
    p = C.shape[0]
    C = _matrix(C, p, n, "C")
    D = _matrix(D, p, m, "D")
    if E is not None:
        E = _matrix(E, n, n, "E")
        if np.array_equal(E, np.eye(n)):
            E = None
    for M in (A, B, C, D) + (() if E is None else (E,)):
        M.setflags(write=False)
    return DescriptorSystem(A, E, B, C, D, ts)


@dataclass(frozen=True)
class EigenvalueList:
    """Finite eigenvalues with multiplicity (listed individually) and
    one entry per infinite block, already decremented by one per the
    pole/zero counting convention."""

    finite: tuple
    infinite_multiplicities: tuple

    @property
    def total(self) -> int:
        return len(self.finite) + sum(self.infinite_multiplicities)

    @property
    def infinite_count(self) -> int:
        return sum(self.infinite_multiplicities)

    def finite_sorted(self):
        return sorted(self.finite, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def evaluate(sys: DescriptorSystem, lambda0: complex) -> np.ndarray:
    """G(lambda0) = C (lambda0*E - A)^{-1} B + D."""
    lam = complex(lambda0)
    n = sys.n
    if n == 0:
        return sys.D.astype(complex)
    P = lam * sys.e_matrix - sys.A
    s = np.linalg.svd(P, compute_uv=False)
    if s[-1] <= 10 * n * EPS * max(s[0], 1.0):
        cond = np.inf if s[-1] == 0 else s[0] / s[-1]
        raise EvaluationError(
            f"evaluation point {lam} is a pole to working precision", condition=cond
        )
    X = np.linalg.solve(P, sys.B.astype(complex))
    return sys.C @ X + sys.D


def transpose(sys: DescriptorSystem) -> DescriptorSystem:
    """Realization of G(lambda).T."""
    E = None if sys.E is None else sys.E.T
    return make_dss(sys.A.T, E, sys.C.T, sys.B.T, sys.D.T, sys.ts)


def conjugate(sys: DescriptorSystem) -> DescriptorSystem:
    """Realization of the adjoint G~: G.T(-s) in continuous time,
    G.T(1/z) in discrete time.

    The discrete construction swaps the roles of A and E so that no
    invertibility of A is required; the doubled state dimension is
    reduced again by a non-dynamic-mode cleanup.
    """
    if sys.ts == CONTINUOUS:
        E = None if sys.E is None else sys.E.T
        return make_dss(-sys.A.T, E, sys.C.T, -sys.B.T, sys.D.T, sys.ts)
    n, m, p = sys.n, sys.m, sys.p
    if n == 0:
        return make_dss(sys.A.T, None if sys.E is None else sys.E.T, sys.C.T, sys.B.T, sys.D.T, sys.ts)
    Emat = sys.e_matrix
    At = scipy.linalg.block_diag(Emat.T, np.eye(n))
    Et = np.block([[sys.A.T, np.zeros((n, n))], [np.eye(n), np.zeros((n, n))]])
    Bt = np.vstack([-sys.C.T, np.zeros((n, p))])
    Ct = np.hstack([np.zeros((m, n)), sys.B.T])
    out = make_dss(At, Et, Bt, Ct, sys.D.T, sys.ts)
    return _remove_nondynamic(out, DEFAULT_TOL)


def _check_ts(sys1, sys2):
    if sys1.ts != sys2.ts:
        raise InputError("time-domain tags do not match")


def stack_vertical(sys1: DescriptorSystem, sys2: DescriptorSystem) -> DescriptorSystem:
    """Realization of [G1; G2] (shared input)."""
    _check_ts(sys1, sys2)
    if sys1.m != sys2.m:
        raise InputError("vertical stacking requires equal input counts")
    A = scipy.linalg.block_diag(sys1.A, sys2.A)
    E = None
    if sys1.E is not None or sys2.E is not None:
        E = scipy.linalg.block_diag(sys1.e_matrix, sys2.e_matrix)
    B = np.vstack([sys1.B, sys2.B])
    C = scipy.linalg.block_diag(sys1.C, sys2.C)
    D = np.vstack([sys1.D, sys2.D])
    return make_dss(A, E, B, C, D, sys1.ts)


def stack_horizontal(sys1: DescriptorSystem, sys2: DescriptorSystem) -> DescriptorSystem:
    """Realization of [G1, G2] (shared output)."""
    _check_ts(sys1, sys2)
    if sys1.p != sys2.p:
        raise InputError("horizontal stacking requires equal output counts")
    A = scipy.linalg.block_diag(sys1.A, sys2.A)
    E = None
    if sys1.E is not None or sys2.E is not None:
        E = scipy.linalg.block_diag(sys1.e_matrix, sys2.e_matrix)
    B = scipy.linalg.block_diag(sys1.B, sys2.B)
    C = np.hstack([sys1.C, sys2.C])
    D = np.hstack([sys1.D, sys2.D])
    return make_dss(A, E, B, C, D, sys1.ts)


def series(sys1: DescriptorSystem, sys2: DescriptorSystem) -> DescriptorSystem:
    """Realization of the product G1(lambda) @ G2(lambda)."""
    _check_ts(sys1, sys2)
    if sys1.m != sys2.p:
        raise InputError("series connection requires inner dimensions to match")
    n1, n2 = sys1.n, sys2.n
    A = np.block([[sys1.A, sys1.B @ sys2.C], [np.zeros((n2, n1)), sys2.A]])
    E = None
    if sys1.E is not None or sys2.E is not None:
        E = scipy.linalg.block_diag(sys1.e_matrix, sys2.e_matrix)
    B = np.vstack([sys1.B @ sys2.D, sys2.B])
    C = np.hstack([sys1.C, sys1.D @ sys2.C])
    D = sys1.D @ sys2.D
    return make_dss(A, E, B, C, D, sys1.ts)


def identity_system(m: int, ts: str) -> DescriptorSystem:
    return make_dss(np.zeros((0, 0)), None, np.zeros((0, m)), np.zeros((m, 0)), np.eye(m), ts)


# -- evaluation grids --------------------------------------------------------


def frequency_grid(ts: str, count: int = 32):
    """Reproducible frequency grid: points i*w with w log-spaced in
    [1e-3, 1e3] for continuous time, points on the unit circle (offset
    half a step to avoid the real axis) for discrete time."""
    if ts == CONTINUOUS:
        return [1j * w for w in np.logspace(-3.0, 3.0, count)]
    theta = 2.0 * np.pi * (np.arange(count) + 0.5) / count
    return [complex(np.cos(t), np.sin(t)) for t in theta]


def _finite_eigen_points(sys: DescriptorSystem):
    vals = []
    for a, b in generalized_eigenvalues(sys.A, sys.e_matrix):
        if b > 1e-12 * max(abs(a), 1.0):
            vals.append(a / b)
    return vals


def random_nonpole_points(systems, count: int, rng=None, margin_scale: float = 1e-3):
    """Random complex evaluation points rejection-sampled away from the
    finite eigenvalues of A - lambda*E of every given system."""
    rng = np.random.default_rng(0) if rng is None else rng
    if isinstance(systems, DescriptorSystem):
        systems = [systems]
    eigs = [z for sys in systems for z in _finite_eigen_points(sys)]
    radius = max([1.0] + [abs(z) for z in eigs])
    margin = margin_scale * radius
    points = []
    attempts = 0
    while len(points) < count and attempts < 100 * count + 100:
        attempts += 1
        z = complex(rng.standard_normal(), rng.standard_normal()) * radius
        if all(abs(z - w) > margin for w in eigs):
            points.append(z)
    if len(points) < count:
        raise StructureError("could not sample evaluation points away from the spectrum")
    return points


# -- structural queries ------------------------------------------------------


def _system_pencil(sys: DescriptorSystem):
    n, m, p = sys.n, sys.m, sys.p
    M = np.block([[sys.A, sys.B], [sys.C, sys.D]])
    N = np.zeros((n + p, n + m))
    N[:n, :n] = sys.e_matrix
    return M, N


def normal_rank(sys: DescriptorSystem, tol: ToleranceConfig | None = None, rng=None) -> int:
    """Rank of G(lambda) over the rational functions, computed as
    rank S(lambda0) - n at random non-eigenvalue points, cross-checked
    at a second point."""
    tol = tol or DEFAULT_TOL
    rng = np.random.default_rng(0) if rng is None else rng
    M, N = _system_pencil(sys)
    n = sys.n
    for _ in range(5):
        pts = random_nonpole_points(sys, 2, rng)
        ranks = []
        for z in pts:
            S = M - z * N
            s = np.linalg.svd(S, compute_uv=False)
            thresh = tol.resolve(s[0] if s.size else 0.0, S.shape)
            ranks.append(int(np.count_nonzero(s > thresh)) - n)
        if ranks[0] == ranks[1]:
            return max(ranks[0], 0)
    raise StructureError("normal rank probe points kept disagreeing after 5 attempts")


# -- irreducible (minimal) realizations --------------------------------------


def _pick_shift(A, Emat):
    n = A.shape[0]
    scale = max(np.linalg.norm(A, "fro"), np.linalg.norm(Emat, "fro"), 1e-300)
    best_sigma, best_r = None, -1.0
    rng = np.random.default_rng(17)
    # moderate shifts only: a shift far outside the dynamics shrinks
    # the (A - sigma*E)^{-1} Krylov directions that carry the finite
    # modes until the growth thresholds mistake them for noise
    candidates = [0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0]
    candidates += list(rng.standard_normal(6))
    for sigma in candidates:
        T = A - sigma * Emat
        s = np.linalg.svd(T, compute_uv=False)
        # measure invertibility against the pencil scale, not against
        # T itself: a uniformly tiny T is "well conditioned" but the
        # subsequent solve would amplify roundoff to working size
        r = s[-1] / scale
        if r > best_r:
            best_r, best_sigma = r, sigma
        if r > 1e-3:
            break
    if best_r <= 100 * n * EPS:
        raise StructureError("pencil A - lambda*E is numerically singular")
    return best_sigma


def _controllable_projection(sys: DescriptorSystem, tol: ToleranceConfig):
    """Orthonormal basis of the smallest invariant subspace containing
    range((A - sigma*E)^{-1} B), which carries both the finite and the
    infinite controllable structure."""
    n = sys.n
    Emat = sys.e_matrix
    sigma = _pick_shift(sys.A, Emat)
    T = sys.A - sigma * Emat
    lu = scipy.linalg.lu_factor(T)
    M = scipy.linalg.lu_solve(lu, Emat)
    Bt = scipy.linalg.lu_solve(lu, sys.B)
    scale = max(np.linalg.norm(M, "fro"), np.linalg.norm(Bt, "fro"), 1.0)
    # floor the staircase threshold at a safety margin over machine
    # precision: the inputs are typically the end of a chain of
    # orthogonal products, so their noise floor is well above one ulp
    thresh = max(tol.resolve(scale, (n, n)), 100 * n * EPS * scale)
    Q = orth_basis(Bt, thresh)
    while Q.shape[1] < n:
        grown = orth_basis(np.hstack([Q, M @ Q]), thresh)
        if grown.shape[1] == Q.shape[1]:
            break
        Q = grown
    return Q, M, Bt, sigma


def _controllable_part(sys: DescriptorSystem, tol: ToleranceConfig) -> DescriptorSystem:
    if sys.n == 0:
        return sys
    Q, M, Bt, sigma = _controllable_projection(sys, tol)
    k = Q.shape[1]
    if k == sys.n:
        return sys
    Ek = Q.T @ M @ Q
    Ak = np.eye(k) + sigma * Ek
    Bk = Q.T @ Bt
    Ck = sys.C @ Q
    return make_dss(Ak, Ek, Bk, Ck, sys.D, sys.ts)


def _observable_part(sys: DescriptorSystem, tol: ToleranceConfig) -> DescriptorSystem:
    return transpose(_controllable_part(transpose(sys), tol))


def _remove_nondynamic(sys: DescriptorSystem, tol: ToleranceConfig) -> DescriptorSystem:
    """Eliminate states violating A N(E) in R(E); the transfer function
    is preserved exactly by Gaussian elimination of algebraic states."""
    A, B, C, D = sys.A, sys.B, sys.C, sys.D
    Emat = sys.e_matrix
    while True:
        n = A.shape[0]
        if n == 0:
            break
        U, s, V, q = rank_revealing_svd(Emat, tol)
        if q == n:
            break
        U2, V2 = U[:, q:], V[:, q:]
        A22 = U2.T @ A @ V2
        # the eliminable part of A22 must be solidly nonzero on the
        # scale of A itself; entries at roundoff level are kept as
        # dynamic structure rather than divided by
        scale = max(np.linalg.norm(A, "fro"), 1.0)
        U3, s3, V3t = np.linalg.svd(A22)
        V3 = V3t.T
        q2 = int(np.count_nonzero(s3 > 100 * n * EPS * scale))
        if q2 == 0:
            break
        rows_keep = np.hstack([U[:, :q], U2 @ U3[:, q2:]])
        rows_elim = U2 @ U3[:, :q2]
        cols_keep = np.hstack([V[:, :q], V2 @ V3[:, q2:]])
        cols_elim = V2 @ V3[:, :q2]
        A11 = rows_keep.T @ A @ cols_keep
        A12 = rows_keep.T @ A @ cols_elim
        A21 = rows_elim.T @ A @ cols_keep
        A22i = rows_elim.T @ A @ cols_elim
        B1 = rows_keep.T @ B
        B2 = rows_elim.T @ B
        C1 = C @ cols_keep
        C2 = C @ cols_elim
        sol = np.linalg.solve(A22i, np.hstack([A21, B2]))
        X21, XB = sol[:, : A21.shape[1]], sol[:, A21.shape[1]:]
        A = A11 - A12 @ X21
        B = B1 - A12 @ XB
        C = C1 - C2 @ X21
        D = D - C2 @ XB
        Emat = rows_keep.T @ Emat @ cols_keep
    return make_dss(A, Emat if A.shape[0] else None, B, C, D, sys.ts)


def irreducible_realization(sys: DescriptorSystem, tol: ToleranceConfig | None = None) -> DescriptorSystem:
    """Controllable, observable realization of the same transfer
    function, with non-dynamic modes removed."""
    tol = tol or DEFAULT_TOL
    current = sys
    for _ in range(5):
        before = current.n
        current = _controllable_part(current, tol)
        current = _observable_part(current, tol)
        current = _remove_nondynamic(current, tol)
        if current.n == before:
            break
    return current


# -- poles, zeros, McMillan degree -------------------------------------------


def _eigen_list_from_pencil(M, N, tol: ToleranceConfig) -> EigenvalueList:
    from .klf import kronecker_like_form

    res = kronecker_like_form(M, N, tol)
    finite = []
    for a, b in res.finite_eigenvalues:
        finite.append(a / b)
    infinite = tuple(d - 1 for d in res.infinite_divisor_degrees if d > 1)
    return EigenvalueList(tuple(finite), infinite)


def poles(sys: DescriptorSystem, tol: ToleranceConfig | None = None) -> EigenvalueList:
    """Pole structure of G: finite eigenvalues of A - lambda*E of an
    irreducible realization, plus infinite eigenvalue multiplicities
    decremented by one."""
    tol = tol or DEFAULT_TOL
    red = irreducible_realization(sys, tol)
    if red.n == 0:
        return EigenvalueList((), ())
    return _eigen_list_from_pencil(red.A, red.e_matrix, tol)


def zeros(sys: DescriptorSystem, tol: ToleranceConfig | None = None) -> EigenvalueList:
    """Zero structure of G from the regular part of the Kronecker-like
    form of the system matrix pencil of an irreducible realization."""
    tol = tol or DEFAULT_TOL
    red = irreducible_realization(sys, tol)
    M, N = _system_pencil(red)
    return _eigen_list_from_pencil(M, N, tol)


def mcmillan_degree(sys: DescriptorSystem, tol: ToleranceConfig | None = None) -> int:
    """Total pole count, finite plus infinite."""
    return poles(sys, tol).total
