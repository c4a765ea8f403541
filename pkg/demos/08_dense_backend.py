"""
Dense states, fidelity and Uhlmann purifications
================================================

The symbolic backend tracks BB84 states exactly.  The dense backend handles
arbitrary density matrices on a few qubits and checks the purification
lemma: nearby states have nearby purifications.
"""

# %%
import numpy as np

from ebcsim.bits import derive_rng
from ebcsim.quantum import (DenseState, bb84_state, fidelity, pure_trace_distance,
                            random_density_matrix, trace_distance, uhlmann_purifications)

ket0 = bb84_state([0], [0])
plus = bb84_state([0], [1])
print("D(|0>, |+>) =", round(trace_distance(ket0, plus), 5), "| F =", round(fidelity(ket0, plus), 5))

# %%
rng = derive_rng(8)
print(" q     eps    purified   sqrt(2 eps)   |<psi|psi'>| - F")
for i in range(6):
    q = 1 + i % 2
    rho, sigma = random_density_matrix(q, rng), random_density_matrix(q, rng)
    eps = trace_distance(rho, sigma)
    psi, phi = uhlmann_purifications(rho, sigma)
    gap = abs(np.vdot(psi, phi)) - fidelity(rho, sigma)
    print(f" {q}  {eps:6.3f}   {pure_trace_distance(psi, phi):8.3f}   {np.sqrt(2 * eps):10.3f}   {gap:+.1e}")
