"""
Binding by exhaustive search
============================

A dishonest Alice may commit any classical 16-bit string, flip up to two
positions later, and open any message.  Enumerating every choice shows she
can never open anything other than the simulator's value, as long as the
code distance exceeds four times the acceptance threshold.
"""

# %%
import time

from ebcsim import ProtocolParams, split_support_code
from ebcsim.adversary import binding_attack_exhaustive, weak_binding_sum

params = ProtocolParams(n=16, m=8, t=1, gamma=0.0, k=2, d=10, ell=1)
code = split_support_code(16, 10)

start = time.perf_counter()
res = binding_attack_exhaustive(params, code, budget=2)
print(f"max equivocation {res.max_probability} over {res.strings} strings and "
      f"{res.patterns} flip patterns ({time.perf_counter() - start:.2f} s)")

# %%
# Raise the threshold to 5 (d = 10 is no longer > 4 * 5) and a witness appears.
bad = binding_attack_exhaustive(params, code, budget=2, threshold=5)
s, e, x = bad.witness
print("threshold 5 ->", bad.max_probability)
print(f"  commit {s:016b}, flip {e:016b}, open message {x:02b}")

# %%
# Weak binding: summed over the values of c, Alice's success is at most 1.
print("sum_c p_c =", weak_binding_sum(params, code, 2), "| with threshold 5:",
      weak_binding_sum(params, code, 2, threshold=5))
