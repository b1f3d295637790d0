"""
Scaling and comparing seminorms
===============================

Multiplying the seminorm by t divides every distance by t. A larger seminorm
gives smaller distances, which is what happens when l <= 1 and the Lipschitz
seminorm is compared with its Hoelder version.
"""
from statemetric import LengthFunction, LengthLipschitzSeminorm, fuzzy_torus, random_state, scale_seminorm
from statemetric import spectral_distance

inst = fuzzy_torus(3)
L = LengthLipschitzSeminorm(inst.action, inst.length)
mu, nu = random_state(3, 1), random_state(3, 2)
base = spectral_distance(L, mu, nu, tolerance=1e-9).value
for t in (0.5, 2.0, 10.0):
    r = spectral_distance(scale_seminorm(L, t), mu, nu, tolerance=1e-9).value
    print(f"t={t:4}: {r:.9f}  vs base/t {base / t:.9f}")

lf = inst.length
unit = LengthFunction(lf.group, lf.values / lf.values.max())
for r in (1.0, 0.75, 0.5, 0.25):
    H = LengthLipschitzSeminorm(inst.action, unit, r=r)
    print(f"r={r:4}: rho = {spectral_distance(H, mu, nu).value:.6f}")
