"""
Pseudo-inverse and inner - quasi-outer factorization
====================================================

Two more applications of range bases.

The Moore-Penrose pseudo-inverse of a rational matrix comes from two
nested inner compressions: G = U G1 with U a minimal inner range
basis, G1' = V' G2' with V' another one, then G# = V~ G2^{-1} U~.
The product identities G G# G = G and G# G G# = G# hold at every
point; the Hermitian symmetry of G G# and G# G is a property of the
frequency axis (imaginary axis or unit circle), which is where it is
checked.

The inner - quasi-outer factorization G = Gi Go makes the left factor
stable and inner and leaves all bad-region zeros reflected into Gi,
while Go keeps full row rank with zeros only in the good region.
"""

import numpy as np

import rmfact as rm

g = rm.polynomial_rank2_discrete()
print("G: discrete 3x3 polynomial matrix, normal rank 2, zero at 1")

gp = rm.pseudo_inverse(g)
print()
print("pseudo-inverse order:", gp.n)

rng = np.random.default_rng(1)
pts = rm.random_nonpole_points([g, gp], 12, rng)
w1 = w2 = 0.0
for z in pts:
    Gz, Pz = rm.evaluate(g, z), rm.evaluate(gp, z)
    scale = 1.0 + np.linalg.norm(Gz)
    w1 = max(w1, np.linalg.norm(Gz @ Pz @ Gz - Gz) / scale)
    w2 = max(w2, np.linalg.norm(Pz @ Gz @ Pz - Pz) / scale)
print("product identities (any point):  ", f"{w1:.2e}", f"{w2:.2e}")

w3 = w4 = 0.0
for z in rm.frequency_grid("discrete", 32):
    Gz, Pz = rm.evaluate(g, z), rm.evaluate(gp, z)
    GP, PG = Gz @ Pz, Pz @ Gz
    scale = 1.0 + np.linalg.norm(Gz)
    w3 = max(w3, np.linalg.norm(GP.conj().T - GP) / scale)
    w4 = max(w4, np.linalg.norm(PG.conj().T - PG) / scale)
print("Hermitian identities (unit circle):", f"{w3:.2e}", f"{w4:.2e}")

Gi, Go = rm.inner_outer(g)
print()
print("inner factor degree:", rm.mcmillan_degree(Gi),
      "poles:", [round(z.real, 6) for z in rm.poles(Gi).finite])
print("quasi-outer degree:", rm.mcmillan_degree(Go),
      "zeros:", sorted(round(z.real, 6) for z in rm.zeros(Go).finite))
worst = max(
    np.linalg.norm(rm.evaluate(Gi, z).conj().T @ rm.evaluate(Gi, z) - np.eye(2))
    for z in rm.frequency_grid("discrete", 32)
)
print("max |Gi~Gi - I| on the unit circle:", f"{worst:.2e}")

pts = rm.random_nonpole_points([g, Gi, Go], 8, rng)
resid = max(
    np.linalg.norm(rm.evaluate(g, z) - rm.evaluate(Gi, z) @ rm.evaluate(Go, z))
    / (1.0 + np.linalg.norm(rm.evaluate(g, z)))
    for z in pts
)
print("product residual G - Gi Go:", f"{resid:.2e}")

# the continuous example rounds the picture out: its unstable zeros
# {1, 2} turn into the zeros of the inner factor, with poles at the
# mirrored positions
gc = rm.stable_rank2_continuous()
Gi_c, Go_c = rm.inner_outer(gc)
print()
print("continuous inner factor poles:",
      sorted(round(z.real, 4) for z in rm.poles(Gi_c).finite))
print("continuous inner factor zeros:",
      sorted(round(z.real, 4) for z in rm.zeros(Gi_c).finite))
