"""
Closed-form bounds
==================

Entropy accounting behind correctness, hiding and expungement, with a
per-term trace showing which penalty dominates.
"""

# %%
from ebcsim.bounds import (binary_entropy, correctness_epsilon, expungement_bound, f_epsilon,
                           gv_boundary_root, uncertainty_relation_bound, weak_binding_delta)

r = gv_boundary_root()
print(f"GV boundary r* = {r:.5f}, check 1 - H2(4r*) = {1 - binary_entropy(4 * r):.5f}")
print("correctness epsilon at delta' n = 40:", correctness_epsilon(40 / 128, 128, 8))
print("f_eps(0.1) =", round(f_epsilon(0.1), 3))
print("uncertainty relation n=100, rate 0.11, delta=5:", round(uncertainty_relation_bound(100, 0.11, 0, 5), 3))

# %%
rep = expungement_bound(n=256, k=128, gamma=0.05, eps=0.1, mu_eps=0.0, delta_eps=10)
for term, bits in rep.trace:
    print(f"{term:<48} {bits:+9.3f}")
print(f"{'total':<48} {rep.value:+9.3f}  vacuous={rep.vacuous}")

# %%
# The bound only becomes useful at much larger n with a small corruption rate.
for n in (1_000, 10_000, 100_000):
    print(n, round(expungement_bound(n, n // 2, 0.01, 1e-3, 0.0, 10).value, 1))

print(weak_binding_delta(4, 1e-4).trace)
