"""
Tolerating channel noise
========================

Depolarizing noise with parameter eps flips a same-basis outcome with
probability eps / 2.  The honest open succeeds when at most
floor(gamma n) outcomes flip, so the exact success rate is a binomial tail.
"""

# %%
from scipy.stats import binom

from ebcsim import AdversaryHooks, ProtocolParams, run_protocol, split_support_code
from ebcsim.params import Flag

params = ProtocolParams(n=64, m=8, t=0, gamma=0.1, k=2, d=42, ell=1)
code = split_support_code(64, 43)
trials = 400

print(" eps   simulated   exact tail")
for eps in (0.0, 0.05, 0.1, 0.2, 0.3):
    hooks = AdversaryHooks(depolarizing_eps=eps)
    ok = 0
    for run in range(trials):
        state, res = run_protocol(params, code, 3, "open", hooks, run)
        ok += res.flag_b is Flag.SUCCESS
    exact = binom.cdf(params.accept_threshold, params.n, eps / 2)
    print(f"{eps:4.2f}   {ok / trials:9.3f}   {exact:10.4f}")
