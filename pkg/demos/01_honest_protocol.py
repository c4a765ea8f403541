"""
Commit, open and erase with honest parties
==========================================

Alice commits to a random x through eight trusted nodes holding two qubits
each, then either opens (Bob learns c = Ext(x, r)) or erases (the qubits come
back and Alice checks them).
"""

# %%
from ebcsim import ProtocolParams, run_commit, run_erase, run_open, split_support_code, validate_params

params = ProtocolParams(n=16, m=8, t=1, gamma=0.0, k=2, d=10, ell=1)
code = split_support_code(16, 10)  # g1 = 1^10 0^6, g2 = 0^6 1^10
report = validate_params(params)
print("valid:", report.ok, "| accept threshold:", params.accept_threshold,
      "| required d:", params.required_distance)

# %%
# Open: the nodes forward their slices to Bob, who measures in theta.
state, _ = run_commit(params, code, seed=1)
print("Alice's c:", state.c.to_str())
res = run_open(state)
print("Bob's c_hat:", res.c_hat.to_str(), "| F_B:", res.flag_b.value, "| distance:", res.distance)

# %%
# The transcript is one JSON object per message plus a closing summary.
for line in res.transcript.to_jsonl().splitlines()[:6]:
    print(line)
print("...")
print(res.transcript.to_jsonl().splitlines()[-1])

# %%
# Erase: the qubits return to Alice instead and Bob outputs 0^ell.
state, _ = run_commit(params, code, seed=1)
res = run_erase(state)
print("F_A:", res.flag_a.value, "| Bob's c_hat:", res.c_hat.to_str())
print("who holds the qubits now:", res.transcript.holdings)
