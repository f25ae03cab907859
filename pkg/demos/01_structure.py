"""
Structural queries on rational matrices
=======================================

A rational matrix G(lambda) is held as a descriptor realization
(A - lambda*E, B, C, D) with G = C (lambda*E - A)^{-1} B + D. This
script builds the two demo systems and reads off their structure:
evaluation at a point, normal rank, poles, zeros, McMillan degree.
"""

import numpy as np

import rmfact as rm

# a stable continuous 3x3 matrix whose third column is the sum of the
# first two, so the normal rank drops to 2
g1 = rm.stable_rank2_continuous()
print("continuous system:", f"{g1.p}x{g1.m}, order {g1.n}")
print("G(0) =")
print(np.real_if_close(rm.evaluate(g1, 0.0)))

print("normal rank:", rm.normal_rank(g1))
print("McMillan degree:", rm.mcmillan_degree(g1))

pl = rm.poles(g1)
zl = rm.zeros(g1)
print("poles:", sorted(z.real for z in pl.finite))
print("finite zeros:", sorted(z.real for z in zl.finite),
      "| infinite zeros:", zl.infinite_count)

# a discrete polynomial matrix: E is nilpotent, so det(A - z*E) is
# constant and every finite z is a regular point; all poles sit at
# infinity
g2 = rm.polynomial_rank2_discrete()
print()
print("discrete polynomial system:", f"{g2.p}x{g2.m}, order {g2.n}")
print("G(2) =")
print(np.real_if_close(rm.evaluate(g2, 2.0)))
print("normal rank:", rm.normal_rank(g2))
print("McMillan degree:", rm.mcmillan_degree(g2))
p2 = rm.poles(g2)
print("finite poles:", list(p2.finite), "| infinite poles:", p2.infinite_count)
print("zeros:", [round(z.real, 6) for z in rm.zeros(g2).finite])

# structural operations compose realizations without touching the
# rational arithmetic; evaluation stays consistent
both = rm.stack_vertical(g1, rm.transpose(rm.conjugate(g1)))
z0 = 0.3 + 0.4j
top = rm.evaluate(g1, z0)
full = rm.evaluate(both, z0)
print()
print("stacking residual:", np.linalg.norm(full[:3] - top))
