"""
The block splitting form of the system matrix pencil
====================================================

The system matrix pencil of a realization of G is

    S(lambda) = [ A - lambda*E   B ]
                [      C         D ]

Two orthogonal transformations diag(U, I) S(lambda) Z expose a block
pattern whose trailing blocks (A_bl - lambda*E_bl, B_bl, C_bl, D_bl)
realize a range basis of G, while the leading block absorbs the
structure that the basis is allowed to drop: right singular blocks,
eigenvalues in the good region, and (for a minimal basis) the
infinite structure.
"""

import numpy as np

import rmfact as rm

g = rm.stable_rank2_continuous()

# the bad region decides which zeros of G the basis must keep; with
# the open right half-plane as bad region, the unstable zeros 1 and 2
# stay with the basis blocks
region = rm.stability_region("continuous")
sk = rm.special_klf(g, region)
print("bad region = open right half-plane")
print("row blocks [n_rg, n_bl, m_n, p]:", [sk.n_rg, sk.n_bl, sk.m_n, sk.p])
print("col blocks [c1, n_bl, r, m_n]:", [sk.c1, sk.n_bl, sk.r, sk.m_n])
print("normal rank from the form:", sk.r)
ev = np.linalg.eigvals(np.linalg.solve(sk.E_bl, sk.A_bl))
print("trailing block eigenvalues:", sorted(round(float(v), 4) for v in ev.real))

# with an empty bad region every zero may be dropped and the basis
# becomes as small as possible
sk0 = rm.special_klf(g, rm.region_none())
print()
print("bad region = empty (minimal basis)")
print("row blocks:", [sk0.n_rg, sk0.n_bl, sk0.m_n, sk0.p])
print("trailing block order:", sk0.n_bl)

# the transformation is orthogonal and exactly reproduces the pencil
n, m, p = g.n, g.m, g.p
M = np.block([[g.A, g.B], [g.C, g.D]])
N = np.zeros_like(M)
N[:n, :n] = g.e_matrix
U_full = np.eye(n + p)
U_full[:n, :n] = sk.U
err_M = np.linalg.norm(U_full @ M @ sk.Z - sk.M)
err_N = np.linalg.norm(U_full @ N @ sk.Z - sk.N)
print()
print("reconstruction errors:", f"{err_M:.2e}", f"{err_N:.2e}")
print("orthogonality:",
      f"{np.linalg.norm(sk.U.T @ sk.U - np.eye(n)):.2e}",
      f"{np.linalg.norm(sk.Z.T @ sk.Z - np.eye(n + m)):.2e}")

# the general Kronecker-like staircase that powers the reduction is
# available directly for any rectangular pencil
res = rm.kronecker_like_form(M, N)
print()
print("system pencil Kronecker structure")
print("right minimal indices:", res.right_minimal_indices)
print("finite eigenvalues:", sorted(np.real(a / b) for a, b in res.finite_eigenvalues))
print("infinite divisor degrees:", res.infinite_divisor_degrees)
print("left minimal indices:", res.left_minimal_indices)
