"""
Fuzzy spheres and the Dirac operator
====================================

SU(2) acts on M_n through the spin-(n-1)/2 representation. Two seminorms come
from it: the norm of the derivative da and the commutator norm ||[D, a]||.
They bracket each other, and so do the distances they define.
"""
import numpy as np

from statemetric import (DiracSeminorm, LieSeminorm, basis_state, build_dirac_matrix, fuzzy_sphere,
                         spectral_distance)
from statemetric.seminorms import dirac_seminorm, frame_derivatives

sz = np.diag([1.0, -1.0])
inst = fuzzy_sphere(2)
d = build_dirac_matrix(inst.dirac)
print("D is", d.shape, "and Hermitian:", np.allclose(d, d.conj().T))

ders = frame_derivatives(inst.dirac, sz)
norms = [np.linalg.norm(x, 2) for x in ders]
print("||d_j sz|| =", np.round(norms, 12), " ||[D, sz]|| =", dirac_seminorm(inst.dirac, sz))

for n in (2, 3, 4):
    inst = fuzzy_sphere(n)
    mu, nu = basis_state(n, 0), basis_state(n, n - 1)
    rd = spectral_distance(DiracSeminorm(inst.dirac), mu, nu)
    rl = spectral_distance(LieSeminorm(inst.lie), mu, nu, max_iterations=200)
    print(f"n={n}: Dirac {rd.value:.6f}   derivative [{rl.lo:.6f}, {rl.hi:.6f}]")
