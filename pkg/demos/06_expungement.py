"""
Expunging the nodes' information
================================

All nodes collude (without Bob) and measure a fraction f of their qubits in
random bases before resending.  Each measured qubit is disturbed with
probability 1/4, so grabbing information makes Alice's erase check fail.
"""

# %%
from ebcsim import ProtocolParams, split_support_code
from ebcsim.adversary import expungement_attack_run

params = ProtocolParams(n=64, m=8, t=1, gamma=0.0, k=2, d=42, ell=1)
code = split_support_code(64, 43)

print("  f   measured   accept   exact    advantage | accepted")
for f in (0.0, 0.125, 0.25, 0.5, 1.0):
    res = expungement_attack_run(params, code, 400, 5, fraction=f)
    adv = res.advantage_accepted.estimate if res.advantage_accepted else float("nan")
    print(f"{f:5.3f} {res.measured:8d}   {res.accept_rate:6.3f}   {res.exact_accept:6.4f}   {adv:+.4f}")
