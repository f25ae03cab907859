"""Full-rank and structured factorizations built on range bases.

Every p x m rational matrix G of normal rank r factors as G = R X
with R a p x r range basis and X an r x m full-row-rank cofactor.
Specializing the basis yields dual factorizations, normalized right
coprime factorizations, inner-quasi-outer factorizations, and the
Moore-Penrose pseudo-inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dss import (
    DescriptorSystem,
    conjugate,
    evaluate,
    identity_system,
    irreducible_realization,
    make_dss,
    normal_rank,
    poles,
    random_nonpole_points,
    series,
    stack_vertical,
    transpose,
    zeros,
)
from .exceptions import BoundaryError, FactorizationError, InputError
from .klf import RegionPartition, stability_region
from .numkernel import DEFAULT_TOL, ToleranceConfig
from .rangebasis import RangeOptions, RangeResult, ZEROS_BAD, ZEROS_NONE, cofactor, range_basis

RESIDUAL_GRID = 16


@dataclass(frozen=True)
class FactorizationResult:
    """A two-factor decomposition left @ right of a rational matrix,
    with certificates: the factored rank, residual statistics over a
    random evaluation grid, and pole/zero lists of both factors."""

    left: DescriptorSystem
    right: DescriptorSystem
    kind: str
    certificates: dict = field(default_factory=dict)


def _certificates(sys, left, right, tol, rng=None, count=RESIDUAL_GRID):
    rng = np.random.default_rng(0) if rng is None else rng
    pts = random_nonpole_points([sys, left, right], count, rng)
    residuals = []
    for z in pts:
        Gz = evaluate(sys, z)
        Pz = evaluate(left, z) @ evaluate(right, z)
        residuals.append(
            np.linalg.norm(Gz - Pz, "fro") / (1.0 + np.linalg.norm(Gz, "fro"))
        )
    return {
        "rank": left.m,
        "grid_points": count,
        "max_relative_residual": float(max(residuals)) if residuals else 0.0,
        "mean_relative_residual": float(np.mean(residuals)) if residuals else 0.0,
        "left_order": left.n,
        "right_order": right.n,
        "left_poles": poles(left, tol),
        "left_zeros": zeros(left, tol),
        "right_poles": poles(right, tol),
        "right_zeros": zeros(right, tol),
    }


def full_rank_factorize(
    sys: DescriptorSystem,
    region: RegionPartition | None = None,
    opts: RangeOptions | None = None,
    tol: ToleranceConfig | None = None,
    rng=None,
) -> FactorizationResult:
    """G = R X with R a column basis of the range of G and X its
    cofactor sharing the dynamics of G."""
    tol = tol or DEFAULT_TOL
    rr = range_basis(sys, region, opts, tol)
    X = cofactor(sys, rr, tol)
    cert = _certificates(sys, rr.R, X, tol, rng)
    return FactorizationResult(left=rr.R, right=X, kind="full-rank", certificates=cert)


def dual_full_rank_factorize(
    sys: DescriptorSystem,
    region: RegionPartition | None = None,
    opts: RangeOptions | None = None,
    tol: ToleranceConfig | None = None,
    rng=None,
) -> FactorizationResult:
    """G = X~ R~ with R~ a row basis of the left range space, obtained
    by factoring the transposed matrix."""
    tol = tol or DEFAULT_TOL
    primal = full_rank_factorize(transpose(sys), region, opts, tol, rng)
    left = transpose(primal.right)
    right = transpose(primal.left)
    cert = _certificates(sys, left, right, tol, rng)
    return FactorizationResult(left=left, right=right, kind="dual", certificates=cert)


def nrcf(sys: DescriptorSystem, tol: ToleranceConfig | None = None):
    """Normalized right coprime factorization G = N M^{-1}.

    [N; M] is the minimal inner range basis of [G; I]; stability is the
    canonical region of the system type. Poles of G on the region
    boundary are rejected: the factors would have to absorb a marginal
    mode and the normalization degrades.
    """
    tol = tol or DEFAULT_TOL
    atol = max(tol.eig_atol, 1e-9)
    for lam in poles(sys, tol).finite:
        if sys.ts == "continuous":
            on_edge = abs(lam.real) <= atol * max(1.0, abs(lam))
        else:
            on_edge = abs(abs(lam) - 1.0) <= atol
        if on_edge:
            raise FactorizationError(
                f"coprime factorization rejected: pole on the stability boundary (at {lam:.6g})"
            )
    stacked = stack_vertical(sys, identity_system(sys.m, sys.ts))
    opts = RangeOptions(zeros_policy=ZEROS_BAD, stabilize=True, inner=True)
    try:
        rr = range_basis(stacked, stability_region(sys.ts), opts, tol)
    except BoundaryError as exc:
        raise FactorizationError(str(exc)) from None
    Ri = irreducible_realization(rr.R, tol)
    p = sys.p
    N = make_dss(Ri.A, Ri.E, Ri.B, Ri.C[:p, :], Ri.D[:p, :], sys.ts)
    M = make_dss(Ri.A, Ri.E, Ri.B, Ri.C[p:, :], Ri.D[p:, :], sys.ts)
    return N, M


def _inverse_realization(sys: DescriptorSystem) -> DescriptorSystem:
    """Descriptor realization of G^{-1} for square invertible G; the
    inverse may be improper even when G is proper."""
    if sys.p != sys.m:
        raise InputError("inversion requires a square rational matrix")
    n, m = sys.n, sys.m
    A_i = np.block([[sys.A, sys.B], [sys.C, sys.D]])
    E_i = np.zeros((n + m, n + m))
    E_i[:n, :n] = sys.e_matrix
    B_i = np.vstack([np.zeros((n, m)), -np.eye(m)])
    C_i = np.hstack([np.zeros((m, n)), np.eye(m)])
    return make_dss(A_i, E_i, B_i, C_i, np.zeros((m, m)), sys.ts)


def pseudo_inverse(sys: DescriptorSystem, tol: ToleranceConfig | None = None) -> DescriptorSystem:
    """Moore-Penrose pseudo-inverse of a rational matrix.

    Built from two nested zero-free inner range compressions,
    G = U G1 and G1' = V' G2', giving G# = V~ G2^{-1} U~, returned as
    an irreducible realization.
    """
    tol = tol or DEFAULT_TOL
    r = normal_rank(sys, tol)
    m, p, ts = sys.m, sys.p, sys.ts
    if r == 0:
        return make_dss(
            np.zeros((0, 0)), None, np.zeros((0, p)), np.zeros((m, 0)), np.zeros((m, p)), ts
        )
    opts = RangeOptions(zeros_policy=ZEROS_NONE, stabilize=True, inner=True)
    rr1 = range_basis(sys, None, opts, tol)
    U = rr1.R
    G1 = cofactor(sys, rr1, tol)
    # the cofactor realization inherits the input's order and can be
    # reducible in ways that block the second compression (for example
    # rank [E B] < n); a minimal realization never is
    G1t = irreducible_realization(transpose(G1), tol)
    rr2 = range_basis(G1t, None, opts, tol)
    V = transpose(rr2.R)
    G2 = transpose(cofactor(G1t, rr2, tol))
    composed = series(series(conjugate(V), _inverse_realization(G2)), conjugate(U))
    return irreducible_realization(composed, tol)


def inner_outer(sys: DescriptorSystem, tol: ToleranceConfig | None = None):
    """Factorization G = Gi Go with Gi inner (Gi~ Gi = I, stable) and
    Go a quasi-outer cofactor of full row rank whose zeros avoid the
    open instability region. Zeros of G on the region boundary make
    the inner basis unattainable.
    """
    tol = tol or DEFAULT_TOL
    opts = RangeOptions(zeros_policy=ZEROS_BAD, stabilize=True, inner=True)
    try:
        rr = range_basis(sys, stability_region(sys.ts), opts, tol)
    except BoundaryError as exc:
        raise FactorizationError(str(exc)) from None
    return rr.R, cofactor(sys, rr, tol)
