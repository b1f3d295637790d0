"""
Distances on a commutative algebra
==================================

On diagonal matrices the length seminorm sees only the group translations, so
the state distance should be the optimal transport cost for d(y, z) = l(y z^-1).
"""
import numpy as np

from statemetric import LengthLipschitzSeminorm, MetricContext, cyclic_commutative, random_state, spectral_distance
from statemetric.oracles import kantorovich_lp, metric_from_length

inst = cyclic_commutative(6)
space = metric_from_length(inst.action.group, inst.length)
print("ground metric on Z_6:")
print(space.d.astype(int))

L = LengthLipschitzSeminorm(inst.action, inst.length)
ctx = MetricContext(L)
for i in range(5):
    mu = random_state(6, [i, 0], inst.algebra)
    nu = random_state(6, [i, 1], inst.algebra)
    r = spectral_distance(L, mu, nu, tolerance=1e-9, context=ctx)
    k = kantorovich_lp(space, np.diag(mu.rho).real, np.diag(nu.rho).real)
    print(f"pair {i}: cutting planes [{r.lo:.9f}, {r.hi:.9f}]  transport {k:.9f}")
