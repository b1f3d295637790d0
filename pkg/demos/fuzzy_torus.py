"""
Fuzzy tori
==========

The Weyl action of Z_q x Z_q on M_q, with word length, gives a metric on the
state space of M_q. Every distance stays below twice the mean length.
"""
import numpy as np

from statemetric import (MetricContext, LengthLipschitzSeminorm, basis_state, diameter_bound, distance_matrix,
                         fuzzy_torus, maximally_mixed, random_state, spectral_distance)

q = 4
inst = fuzzy_torus(q)
L = LengthLipschitzSeminorm(inst.action, inst.length)
print("length values:", inst.length.values)
print("diameter bound:", diameter_bound(inst.action, inst.length))

# lo comes from a feasible element, hi from the outer polytope
mu, nu = basis_state(q, 0), basis_state(q, 1)
for budget in (1, 5, 20, 500):
    r = spectral_distance(L, mu, nu, max_iterations=budget)
    print(f"{budget:4d} iterations: [{r.lo:.8f}, {r.hi:.8f}]  certified={r.certified}")

states = [basis_state(q, 0), maximally_mixed(q)] + [random_state(q, s) for s in range(3)]
dm = distance_matrix(L, states, context=MetricContext(L))
np.set_printoptions(precision=5, suppress=True)
print(dm.values("value"))
