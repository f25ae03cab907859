"""Orthogonal reduction of matrix pencils to Kronecker-like forms.

Two reductions are provided. kronecker_like_form brings a general
pencil M - lambda*N to a block upper triangular form exposing its
right singular part, finite and infinite regular parts, and left
singular part. special_klf brings the system matrix pencil of a
descriptor realization to a form that isolates a basis of the range
space with eigenvalues confined to a chosen region.

All rank decisions inside one call share a single absolute threshold
derived from the norm of the input data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import BoundaryError, InputError, StructureError
from .numkernel import (
    DEFAULT_TOL,
    EPS,
    ToleranceConfig,
    col_compress,
    generalized_eigenvalues,
    null_basis,
    ordered_generalized_schur,
    row_compress,
    svd_rank_abs,
)

# -- eigenvalue regions ------------------------------------------------------

REGION_NONE = "none"
REGION_INSTABILITY = "finite-instability"
REGION_ALL_FINITE = "all-finite"
REGION_CUSTOM = "custom"


@dataclass(frozen=True)
class RegionPartition:
    """Disjoint partition of the closed complex plane into a good and a
    bad region, both symmetric about the real axis. kind selects the
    bad set: 'none' (empty), 'finite-instability' (the open instability
    region of the time domain ts), 'all-finite' (every finite point),
    or 'custom' (membership predicate). infinite_is_bad places the
    point at infinity."""

    kind: str
    infinite_is_bad: bool
    ts: str | None = None
    predicate: Callable | None = None

    def __post_init__(self):
        if self.kind not in (REGION_NONE, REGION_INSTABILITY, REGION_ALL_FINITE, REGION_CUSTOM):
            raise InputError(f"unknown region kind {self.kind!r}")
        if self.kind == REGION_INSTABILITY and self.ts not in ("continuous", "discrete"):
            raise InputError("finite-instability region needs ts 'continuous' or 'discrete'")
        if self.kind == REGION_CUSTOM:
            if self.predicate is None:
                raise InputError("custom region needs a membership predicate")
            rng = np.random.default_rng(5)
            for _ in range(8):
                z = complex(rng.standard_normal(), rng.standard_normal()) * 3.0
                if bool(self.predicate(z)) != bool(self.predicate(z.conjugate())):
                    raise InputError("custom region is not symmetric about the real axis")


def region_none(infinite_is_bad: bool = False) -> RegionPartition:
    return RegionPartition(REGION_NONE, infinite_is_bad)


def stability_region(ts: str) -> RegionPartition:
    """Bad set = open instability region of the time domain; the point
    at infinity is bad in discrete time (closed unit disc is good) and
    good in continuous time."""
    return RegionPartition(REGION_INSTABILITY, infinite_is_bad=(ts == "discrete"), ts=ts)


def all_finite_region() -> RegionPartition:
    return RegionPartition(REGION_ALL_FINITE, infinite_is_bad=True)


def custom_region(predicate: Callable, infinite_is_bad: bool = False) -> RegionPartition:
    return RegionPartition(REGION_CUSTOM, infinite_is_bad, predicate=predicate)


def classify_eigenvalue(alpha, beta, region: RegionPartition, tol: ToleranceConfig | None = None) -> str:
    """Classify a generalized eigenvalue given as an (alpha, beta) pair
    into 'good', 'bad', or 'boundary'. A finite eigenvalue closer to
    the region boundary than the configured offset is 'boundary'; with
    the default zero offset no eigenvalue is, and points within eig_atol
    of the boundary classify as good (the good region is closed)."""
    tol = tol or DEFAULT_TOL
    alpha = complex(np.asarray(alpha).item())
    beta = float(np.asarray(beta).item())
    if beta < 0:
        alpha, beta = -alpha, -beta
    if beta <= 1e4 * EPS * (abs(alpha) + beta):
        return "bad" if region.infinite_is_bad else "good"
    lam = alpha / beta
    if region.kind == REGION_NONE:
        return "good"
    if region.kind == REGION_ALL_FINITE:
        return "bad"
    if region.kind == REGION_CUSTOM:
        return "bad" if region.predicate(lam) else "good"
    d = lam.real if region.ts == "continuous" else abs(lam) - 1.0
    if abs(d) < tol.boundary_offset:
        return "boundary"
    if abs(d) <= tol.eig_atol * max(1.0, abs(lam)):
        return "good"
    return "bad" if d > 0 else "good"


# -- general Kronecker-like form ---------------------------------------------


def _stage_peel(M, N, thresh):
    """In-place staircase peeling. Repeatedly compresses the columns of
    the active window of N to push its kernel to the leading columns,
    then row-compresses the corresponding columns of M. Peeled strips
    carry the right singular and infinite structure; the residual
    window has a lambda part of full column rank. Returns orthogonal
    (Q, Z), the stair sizes [(s_k, tau_k)], and the residual origin."""
    m, n = M.shape
    Q = np.eye(m)
    Z = np.eye(n)
    stairs = []
    i0 = j0 = 0
    while n - j0 > 0:
        if m - i0 == 0:
            stairs.append((0, n - j0))
            j0 = n
            break
        Zk, keep = col_compress(N[i0:, j0:], thresh, zeros_leading=True)
        tau = (n - j0) - keep
        if tau == 0:
            break
        M[:, j0:] = M[:, j0:] @ Zk
        N[:, j0:] = N[:, j0:] @ Zk
        Z[:, j0:] = Z[:, j0:] @ Zk
        N[i0:, j0:j0 + tau] = 0.0
        Qk, s = row_compress(M[i0:, j0:j0 + tau], thresh)
        M[i0:, :] = Qk.T @ M[i0:, :]
        N[i0:, :] = Qk.T @ N[i0:, :]
        Q[:, i0:] = Q[:, i0:] @ Qk
        M[i0 + s:, j0:j0 + tau] = 0.0
        N[i0:, j0:j0 + tau] = 0.0
        stairs.append((s, tau))
        i0 += s
        j0 += tau
    return Q, Z, stairs, i0, j0


def _rot(M):
    return M[::-1, ::-1]


def _stage_split_trailing(M, N, thresh):
    """Peel the infinite and left singular structure to the trailing
    block by running the staircase peel on the rotated transpose.
    Returns (Q, Z, Mt, Nt, r1, c1) with Q.T (M - lambda N) Z block
    upper triangular and the leading r1 x c1 block holding the right
    singular and finite structure."""
    m, n = M.shape
    M2 = _rot(M.T).copy()
    N2 = _rot(N.T).copy()
    Q2, Z2, _, i2, j2 = _stage_peel(M2, N2, thresh)
    Jm = np.eye(m)[:, ::-1]
    Jn = np.eye(n)[:, ::-1]
    Qb = Jm @ Z2 @ Jm
    Zb = Jn @ Q2 @ Jn
    Mt = _rot(M2.T).copy()
    Nt = _rot(N2.T).copy()
    return Qb, Zb, Mt, Nt, m - j2, n - i2


def _indices_from_stairs(stairs):
    out = []
    for k, (s, tau) in enumerate(stairs):
        if tau < s:
            raise StructureError("inconsistent staircase ranks; adjust the tolerance")
        out.extend([k] * (tau - s))
    return tuple(sorted(out))


def _degrees_from_stairs(stairs):
    s_seq = [s for s, _ in stairs] + [0]
    out = []
    for k in range(len(stairs)):
        count = s_seq[k] - s_seq[k + 1]
        if count < 0:
            raise StructureError("inconsistent staircase ranks; adjust the tolerance")
        out.extend([k + 1] * count)
    return tuple(sorted(out))


@dataclass(frozen=True)
class KlfResult:
    """Block upper triangular pencil Q.T (A - lambda E) Z with diagonal
    blocks ordered [right singular | finite | infinite | left singular]
    and the structural invariants read off the staircase sizes."""

    M: np.ndarray
    N: np.ndarray
    Q: np.ndarray
    Z: np.ndarray
    right_minimal_indices: tuple
    finite_eigenvalues: tuple
    infinite_divisor_degrees: tuple
    left_minimal_indices: tuple
    right_shape: tuple
    finite_size: int
    infinite_shape: tuple
    left_shape: tuple


def _klf_core(M0, N0, thresh) -> KlfResult:
    m, n = M0.shape
    Mw = M0.copy()
    Nw = N0.copy()
    Q1, Z1, Mw, Nw, r1, c1 = _stage_split_trailing(Mw, Nw, thresh)
    Q = Q1
    Z = Z1

    subM = Mw[:r1, :c1].copy()
    subN = Nw[:r1, :c1].copy()
    Q2, Z2, stairs_r, iR, jR = _stage_peel(subM, subN, thresh)
    Mw[:r1, :c1] = subM
    Nw[:r1, :c1] = subN
    Mw[:r1, c1:] = Q2.T @ Mw[:r1, c1:]
    Nw[:r1, c1:] = Q2.T @ Nw[:r1, c1:]
    Q[:, :r1] = Q[:, :r1] @ Q2
    Z[:, :c1] = Z[:, :c1] @ Z2

    subM = Mw[r1:, c1:].copy()
    subN = Nw[r1:, c1:].copy()
    Q3, Z3, stairs_i, iI, jI = _stage_peel(subM, subN, thresh)
    Mw[r1:, c1:] = subM
    Nw[r1:, c1:] = subN
    Mw[:r1, c1:] = Mw[:r1, c1:] @ Z3
    Nw[:r1, c1:] = Nw[:r1, c1:] @ Z3
    Q[:, r1:] = Q[:, r1:] @ Q3
    Z[:, c1:] = Z[:, c1:] @ Z3

    nF_r = r1 - iR
    nF_c = c1 - jR
    if nF_r != nF_c:
        raise StructureError(
            "rank decisions produced a non-square regular block; adjust the tolerance"
        )
    nF = nF_r
    if nF:
        finite = generalized_eigenvalues(Mw[iR:r1, jR:c1], Nw[iR:r1, jR:c1])
    else:
        finite = []
    for a, b in finite:
        if b <= 1e4 * EPS * (abs(a) + abs(b)):
            raise StructureError(
                "regular split leaked an infinite eigenvalue into the finite block; "
                "adjust the tolerance"
            )

    mL = m - r1 - iI
    nL = n - c1 - jI
    ML = _rot(Mw[r1 + iI:, c1 + jI:].T).copy()
    NL = _rot(Nw[r1 + iI:, c1 + jI:].T).copy()
    _, _, stairs_l, _, _ = _stage_peel(ML, NL, thresh)

    return KlfResult(
        M=Mw,
        N=Nw,
        Q=Q,
        Z=Z,
        right_minimal_indices=_indices_from_stairs(stairs_r),
        finite_eigenvalues=tuple(finite),
        infinite_divisor_degrees=_degrees_from_stairs(stairs_i),
        left_minimal_indices=_indices_from_stairs(stairs_l),
        right_shape=(iR, jR),
        finite_size=nF,
        infinite_shape=(iI, jI),
        left_shape=(mL, nL),
    )


def _pencil_threshold(M, N, tol: ToleranceConfig):
    scale = 0.0
    if M.size:
        scale = np.linalg.norm(np.hstack([M, N]), 2)
    # floor the shared threshold at a safety margin over machine
    # precision: the staircase rank decisions see blocks left over from
    # a chain of orthogonal updates, whose noise floor is well above
    # one ulp of the pencil scale
    q = max(M.shape) if M.size else 1
    return max(tol.resolve(scale, M.shape), 100.0 * q * EPS * scale)


def kronecker_like_form(A, E, tol: ToleranceConfig | None = None) -> KlfResult:
    """Orthogonal reduction of the pencil A - lambda*E (any shape) to
    block upper triangular Kronecker-like form, returning the
    transformed pencil, the transformations, and the right minimal
    indices, finite eigenvalues, infinite elementary divisor degrees,
    and left minimal indices."""
    tol = tol or DEFAULT_TOL
    A = np.asarray(A, dtype=float)
    E = np.asarray(E, dtype=float)
    if A.ndim != 2 or E.ndim != 2:
        raise InputError("pencil matrices must be two-dimensional")
    if A.shape != E.shape:
        raise InputError(f"pencil matrices must share a shape, got {A.shape} and {E.shape}")
    if A.size and not (np.all(np.isfinite(A)) and np.all(np.isfinite(E))):
        raise InputError("pencil matrices contain non-finite entries")
    return _klf_core(A, E, _pencil_threshold(A, E, tol))


# -- range/coimage splitting form --------------------------------------------


@dataclass(frozen=True)
class SpecialKlf:
    """System matrix pencil of (A - lambda E, B, C, D) reduced by
    diag(U, I_p) S(lambda) Z to the block form

        [ A_rg - lambda E_rg      *                *         *  ]
        [        0           A_bl - lambda E_bl   B_bl       *  ]
        [        0                0                0        B_n ]
        [        0               C_bl             D_bl       *  ]

    with row blocks of sizes [n_rg, n_bl, m_n, p] and column blocks of
    sizes [c1, n_bl, r, m_n], c1 = n_rg + m - r. E_rg has full row
    rank, E_bl and B_n are invertible, and the eigenvalues of the
    trailing system pencil built on the bl blocks lie in the bad
    region (plus any singular or infinite structure not movable into
    the leading block)."""

    M: np.ndarray
    N: np.ndarray
    U: np.ndarray
    Z: np.ndarray
    n: int
    m: int
    p: int
    n_rg: int
    n_bl: int
    r: int
    m_n: int
    ts: str
    region: RegionPartition

    @property
    def c1(self) -> int:
        return self.n_rg + self.m - self.r

    @property
    def A_rg(self):
        return self.M[: self.n_rg, : self.c1]

    @property
    def E_rg(self):
        return self.N[: self.n_rg, : self.c1]

    @property
    def A_bl(self):
        return self.M[self.n_rg: self.n_rg + self.n_bl, self.c1: self.c1 + self.n_bl]

    @property
    def E_bl(self):
        return self.N[self.n_rg: self.n_rg + self.n_bl, self.c1: self.c1 + self.n_bl]

    @property
    def B_bl(self):
        return self.M[self.n_rg: self.n_rg + self.n_bl, self.c1 + self.n_bl: self.c1 + self.n_bl + self.r]

    @property
    def C_bl(self):
        return self.M[self.n_rg + self.n_bl + self.m_n:, self.c1: self.c1 + self.n_bl]

    @property
    def D_bl(self):
        return self.M[self.n_rg + self.n_bl + self.m_n:, self.c1 + self.n_bl: self.c1 + self.n_bl + self.r]

    @property
    def B_n(self):
        rows = slice(self.n_rg + self.n_bl, self.n_rg + self.n_bl + self.m_n)
        return self.M[rows, self.c1 + self.n_bl + self.r:]


def _system_pencil_pair(sys):
    n, m, p = sys.n, sys.m, sys.p
    M = np.block([[sys.A, sys.B], [sys.C, sys.D]])
    N = np.zeros((n + p, n + m))
    N[:n, :n] = sys.e_matrix
    return M, N


def _orth_complement_null(stack, width, thresh):
    """Orthonormal basis of the null space of a stacked constraint
    matrix with the given column count; an empty stack leaves the whole
    space."""
    if stack.shape[0] == 0:
        return np.eye(width)
    return null_basis(stack, thresh)


def _check_bad_stabilizable(sys, region, tol, thresh):
    n = sys.n
    Emat = sys.e_matrix
    EB = np.hstack([Emat, sys.B])
    _, rk = row_compress(EB, thresh)
    if rk < n:
        raise StructureError(
            "realization is not stabilizable at infinity: [E B] is row rank deficient"
        )
    for a, b in generalized_eigenvalues(sys.A, Emat):
        cls = classify_eigenvalue(a, b, region, tol)
        if cls == "boundary":
            raise BoundaryError(
                f"eigenvalue {a / b} lies within the boundary offset "
                "of the region boundary"
            )
        if cls != "bad":
            continue
        if b <= 1e4 * EPS * (abs(a) + b):
            continue
        lam = a / b
        P = np.hstack([sys.A - lam * Emat, sys.B]).astype(complex)
        s = np.linalg.svd(P, compute_uv=False)
        if s[-1] <= thresh:
            raise StructureError(
                f"realization is not stabilizable: [A - lambda E, B] loses rank at "
                f"the bad eigenvalue {lam}"
            )


def special_klf(sys, region: RegionPartition, tol: ToleranceConfig | None = None) -> SpecialKlf:
    """Reduce the system matrix pencil of sys to the range/coimage
    splitting form for the given region. Requires the realization to
    be stabilizable with respect to the bad region (including at
    infinity); eigenvalues within the boundary offset of the region
    boundary raise BoundaryError."""
    tol = tol or DEFAULT_TOL
    n, m, p = sys.n, sys.m, sys.p
    Ms, Ns = _system_pencil_pair(sys)
    thresh = _pencil_threshold(Ms, Ns, tol)
    _check_bad_stabilizable(sys, region, tol, thresh)

    S_orig_M = Ms.copy()
    S_orig_N = Ns.copy()
    Q_tot = np.eye(n)
    Z_tot = np.eye(n + m)

    # isolate an invertible constant block in the trailing columns:
    # rows in the left kernel of E carry no lambda part anywhere, and
    # stabilizability at infinity makes their constant part full rank
    U_E, r_e = row_compress(sys.e_matrix, thresh)
    m_n = n - r_e
    c_dyn = n + m - m_n
    if m_n:
        Ms[:n, :] = U_E.T @ Ms[:n, :]
        Ns[:n, :] = U_E.T @ Ns[:n, :]
        Q_tot = Q_tot @ U_E
        Ns[r_e:n, :] = 0.0
        T0 = Ms[r_e:n, :]
        Zk, rk = col_compress(T0, thresh, zeros_leading=True)
        if rk < m_n:
            raise StructureError(
                "realization is not stabilizable at infinity: [E B] is row rank deficient"
            )
        Ms[:, :] = Ms @ Zk
        Ns[:, :] = Ns @ Zk
        Z_tot = Z_tot @ Zk
        Ms[r_e:n, :c_dyn] = 0.0
        Ns[r_e:n, :] = 0.0

    # split the kernel of the output rows and reduce the restricted
    # dynamic pencil, whose right singular and good finite structure
    # spans the leading columns
    CD = Ms[n:, :c_dyn]
    K = null_basis(CD, thresh)
    q = K.shape[1]
    M_P = Ms[:r_e, :c_dyn] @ K
    N_P = Ns[:r_e, :c_dyn] @ K
    res = _klf_core(M_P, N_P, thresh)
    M_Pt, N_Pt = res.M.copy(), res.N.copy()
    Q_P, Z_P = res.Q.copy(), res.Z.copy()
    iR, jR = res.right_shape
    nF = res.finite_size
    iI, jI = res.infinite_shape
    if iI != jI:
        raise StructureError(
            "rank decisions produced a non-square infinite block; adjust the tolerance"
        )
    nreg = nF + iI

    for a, b in res.finite_eigenvalues:
        if classify_eigenvalue(a, b, region, tol) == "boundary":
            raise BoundaryError(
                f"eigenvalue {a / b} lies within the boundary offset of the "
                "region boundary"
            )
    n_fg = sum(
        1
        for a, b in res.finite_eigenvalues
        if classify_eigenvalue(a, b, region, tol) == "good"
    )
    n_good = n_fg + (0 if region.infinite_is_bad else iI)
    if 0 < n_good < nreg:
        # move the good part of the whole regular block (finite and
        # infinite together) into the leading positions
        sel = lambda a, b: classify_eigenvalue(a, b, region, tol) != "bad"
        win_r = slice(iR, iR + nreg)
        win_c = slice(jR, jR + nreg)
        sch = ordered_generalized_schur(
            M_Pt[win_r, win_c], N_Pt[win_r, win_c], sel, tol
        )
        M_Pt[win_r, jR:] = sch.Q.T @ M_Pt[win_r, jR:]
        N_Pt[win_r, jR:] = sch.Q.T @ N_Pt[win_r, jR:]
        M_Pt[:, win_c] = M_Pt[:, win_c] @ sch.Z
        N_Pt[:, win_c] = N_Pt[:, win_c] @ sch.Z
        Q_P[:, win_r] = Q_P[:, win_r] @ sch.Q
        Z_P[:, win_c] = Z_P[:, win_c] @ sch.Z

    n_rg = iR + n_good
    c1 = jR + n_good
    r = n_rg + m - c1
    if r < 0 or r > min(p, m):
        raise StructureError(
            "rank decisions produced an inconsistent range dimension; adjust the tolerance"
        )
    n_bl = r_e - n_rg

    # the leading columns carry the right singular and good regular
    # structure; the input columns must annihilate the lambda part of
    # the trailing rows so the block input matrix stays constant
    V1 = K @ Z_P[:, :c1]
    Erows = Q_P[:, n_rg:].T @ Ns[:r_e, :c_dyn]
    Z3 = _orth_complement_null(np.vstack([Erows, V1.T]), c_dyn, thresh)
    if Z3.shape[1] != r:
        raise StructureError(
            "trailing block lambda part is not of full row rank; adjust the tolerance"
        )
    Z2 = _orth_complement_null(np.vstack([V1.T, Z3.T]), c_dyn, thresh)
    if Z2.shape[1] != n_bl:
        raise StructureError(
            "kernel completion lost dimensions; adjust the tolerance"
        )
    if r_e:
        Ms[:r_e, :] = Q_P.T @ Ms[:r_e, :]
        Ns[:r_e, :] = Q_P.T @ Ns[:r_e, :]
        Q_tot[:, :r_e] = Q_tot[:, :r_e] @ Q_P
    Z_dyn = np.hstack([V1, Z2, Z3])
    Ms[:, :c_dyn] = Ms[:, :c_dyn] @ Z_dyn
    Ns[:, :c_dyn] = Ns[:, :c_dyn] @ Z_dyn
    Z_tot[:, :c_dyn] = Z_tot[:, :c_dyn] @ Z_dyn
    Ms[:r_e, :c1] = M_Pt[:, :c1]
    Ns[:r_e, :c1] = N_Pt[:, :c1]
    Ms[n:, :c1] = 0.0
    Ns[n:, :] = 0.0
    if m_n:
        Ms[r_e:n, :c_dyn] = 0.0
        Ns[r_e:n, :] = 0.0
    Ms[n_rg:r_e, :c1] = 0.0
    Ns[n_rg:r_e, :c1] = 0.0
    Ns[n_rg:r_e, c1 + n_bl:c_dyn] = 0.0
    Ebl = Ns[n_rg:r_e, c1:c1 + n_bl]
    if n_bl and svd_rank_abs(Ebl, thresh) < n_bl:
        raise StructureError(
            "trailing block lambda part is not of full row rank; adjust the tolerance"
        )

    out = SpecialKlf(
        M=Ms,
        N=Ns,
        U=Q_tot.T,
        Z=Z_tot,
        n=n,
        m=m,
        p=p,
        n_rg=n_rg,
        n_bl=n_bl,
        r=r,
        m_n=m_n,
        ts=sys.ts,
        region=region,
    )
    _self_check(out, S_orig_M, S_orig_N, thresh)
    return out


def _self_check(out: SpecialKlf, M0, N0, thresh):
    rng = np.random.default_rng(99)
    n, p = out.n, out.p
    T = np.eye(n + p)
    T[:n, :n] = out.U
    scale = max(np.linalg.norm(M0, "fro"), np.linalg.norm(N0, "fro"), 1.0)
    for lam in rng.standard_normal(2) * 2.0:
        lhs = T @ (M0 - lam * N0) @ out.Z
        rhs = out.M - lam * out.N
        if np.linalg.norm(lhs - rhs, "fro") > max(1e4 * thresh, 1e-10 * scale):
            raise StructureError("splitting form reconstruction check failed")
