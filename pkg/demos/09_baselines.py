"""
One trusted node, quantum versus classical
==========================================

With a classical trusted party, hiding after an erase forces the commit
transcript to be independent of b, and then Alice can open either value.
The one-qubit quantum protocol is hiding after erase and still binding.
"""

# %%
from ebcsim.baselines import (classical_equivocation_attack, classical_erase_coalition_accuracy,
                              quantum_equivocation_attack, simple_protocol_run)

outcome, _ = simple_protocol_run(1, "open", False, seed=0)
print("quantum protocol, open of b=1 ->", outcome)
_, acc = simple_protocol_run(0, "erase", True, seed=0, trials=10_000)
print(f"after erase, Bob + node guess b with accuracy {acc.rate:.3f}")
print("classical protocol with the key shared up front, after erase:",
      classical_erase_coalition_accuracy(0, 1000).rate)

# %%
print("commit 0 / open 1 against the classical protocol:", classical_equivocation_attack(0, 1000).rate)
print("same attack against the quantum protocol:", quantum_equivocation_attack(0, 10_000).rate)
