"""
Codes and Toeplitz hashing
==========================

The commitment encodes x with a binary linear code and derives c with a
two-universal hash.  Both are small enough here to check exhaustively.
"""

# %%
import numpy as np

from ebcsim.bits import derive_rng
from ebcsim.codes import (griesmer_length, gv_feasible, hamming_7_4, message_table,
                          nearest_codeword, search_random_code, split_support_code)
from ebcsim.extractor import MODIFIED, TOEPLITZ, extract_batch, seed_length

code = split_support_code(16, 10)
print(code)
print(code.codeword_table())

# %%
# Unique decoding up to (d - 1) / 2 errors.
y = code.encode("11").bits.copy()
y[[0, 7, 15]] ^= 1
print("decoded:", nearest_codeword(code, y, 4))

# %%
# Random search, with the Griesmer bound ruling out impossible parameters.
rng = derive_rng(0)
print("[7,4,3]:", search_random_code(7, 4, 3, rng, 5000))
print("Griesmer length for k=3, d=9:", griesmer_length(3, 9), "> 16, so no [16,3,9] code")
print("GV feasible at rates 0.05, 0.083, 0.1:", [gv_feasible(r) for r in (0.05, 0.083, 0.1)])

# %%
# Two-universality: collision probability over all seeds for every pair.
k, ell = 6, 2
msgs = message_table(k)
for family in (TOEPLITZ, MODIFIED):
    seeds = message_table(seed_length(k, ell, family))
    worst = 0.0
    for a in range(len(msgs)):
        ca = extract_batch(np.broadcast_to(msgs[a], (len(seeds), k)), seeds, ell, family)
        for b in range(a + 1, len(msgs)):
            cb = extract_batch(np.broadcast_to(msgs[b], (len(seeds), k)), seeds, ell, family)
            worst = max(worst, np.all(ca == cb, axis=1).mean())
    print(f"{family:>8}: seed bits {seeds.shape[1]}, worst collision {worst} (limit {2 ** -ell})")
