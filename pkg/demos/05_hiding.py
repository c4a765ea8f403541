"""
Hiding against coalitions
=========================

A coalition pools what it knows about y and plays a real-or-random game on
c.  The Bayes-optimal advantage is computed exactly at desk scale and
estimated by Monte Carlo from sampled views.
"""

# %%
from ebcsim import ProtocolParams, split_support_code
from ebcsim.adversary import (CoalitionSpec, commit_hiding_bound, erase_hiding_advantage,
                              exact_hiding_advantage, hiding_advantage, local_hiding_check,
                              open_hiding_advantage)

params = ProtocolParams(n=16, m=8, t=1, gamma=0.0, k=2, d=10, ell=1)
code = split_support_code(16, 10)
trials = 50_000

# %%
print("coalition           exact    estimate   bound")
for label, nodes in [("Bob alone", ()), ("Bob + T1", (1,)), ("Bob + T1..T4", (1, 2, 3, 4)),
                     ("Bob + all nodes", tuple(range(1, 9)))]:
    spec = CoalitionSpec(nodes=nodes)
    pos = spec.positions(params)
    est = hiding_advantage(params, code, spec, trials, 1, experiment=label,
                           bound=commit_hiding_bound(params, spec))
    print(f"{label:<18} {exact_hiding_advantage(code, 1, pos):6.3f}   {est.estimate:8.4f}   {est.bound:.3f}")
print("(full knowledge gives 1 - 2^-ell = 0.5 in a real-or-random game with ell = 1)")

# %%
erase = erase_hiding_advantage(params, code, [1], trials, 2)
opened = open_hiding_advantage(params, code, [1], trials, 2)
print(f"after erase {erase.estimate:.4f}, after open (nodes only) {opened.estimate:.4f}")

# %%
# A single honest node sees only u = y xor z on its two positions.
local = local_hiding_check(params, code, 3, trials, 3)
leaked = local_hiding_check(params, code, 3, trials, 3, leak=("z", "r"))
print(f"honest node T3: {local.estimate:+.4f}; if z and r leaked: {leaked.estimate:.4f}")
