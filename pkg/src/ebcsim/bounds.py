"""Closed-form security bounds, all entropies in bits.

Each calculator returning a :class:`BoundReport` keeps a per-term trace so a
reader can see which penalty dominates at given parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from scipy.optimize import bisect


@dataclass
class BoundReport:
    name: str
    inputs: Dict[str, float]
    value: float
    trace: List[Tuple[str, float]] = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        """True for an entropy bound that guarantees nothing (value <= 0)."""
        return self.value <= 0

    def as_record(self) -> Dict[str, object]:
        rec: Dict[str, object] = {"bound": self.name}
        rec.update(self.inputs)
        rec["value"] = self.value
        return rec


def binary_entropy(p: float) -> float:
    """H2(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def gv_boundary_root(tol: float = 1e-12) -> float:
    """Root r* of r = 1 - H2(4r) on (0, 1/4): the edge of the GV regime."""
    return bisect(lambda r: r - (1 - binary_entropy(4 * r)), 1e-6, 0.125, xtol=tol)


def hiding_min_entropy_bound(params) -> float:
    """Min-entropy of x left after leaking (t/m + gamma) n positions of y."""
    return params.k - params.corruption_rate * params.n


def correctness_epsilon(delta_prime: float, n: int, m: int, delta_hbc: float = 0.0) -> float:
    """2^(-delta' n / 2 - 1) + 5 m sqrt(2 delta)."""
    if min(delta_prime, n, m, delta_hbc) < 0:
        raise ValueError("inputs must be non-negative")
    return 2.0 ** (-delta_prime * n / 2 - 1) + 5 * m * math.sqrt(2 * delta_hbc)


def f_epsilon(eps: float) -> float:
    """Smooth-entropy chain-rule penalty log2(1 / (1 - sqrt(1 - eps^2)))."""
    if eps <= 0:
        raise ValueError("f_epsilon diverges as eps -> 0; eps must be > 0")
    if eps > 1:
        raise ValueError("eps must be <= 1")
    return math.log2(1.0 / (1.0 - math.sqrt(1.0 - eps * eps)))


def _check_rate(gamma: float, mu_eps: float) -> float:
    rate = gamma + mu_eps
    if not 0.0 <= rate <= 0.5:
        raise ValueError(f"gamma + mu_eps = {rate} outside [0, 1/2] where H2 is monotone")
    return rate


def uncertainty_relation_bound(n: int, gamma: float, mu_eps: float, delta_eps: float) -> float:
    """Smooth min-entropy of the returned string: n (1 - H2(gamma + mu)) - delta."""
    rate = _check_rate(gamma, mu_eps)
    return n * (1 - binary_entropy(rate)) - delta_eps


def expungement_bound(n: int, k: int, gamma: float, eps: float,
                      mu_eps: float, delta_eps: float) -> BoundReport:
    """Lower bound on the 7eps-smooth min-entropy of x given the nodes' memory and z.

    The six ``f_eps`` penalties come from four chain-rule applications; the
    trace lists them separately.
    """
    rate = _check_rate(gamma, mu_eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    f = f_epsilon(eps)
    leak = n * binary_entropy(rate)
    trace = [
        ("dimension k", float(k)),
        ("uncertainty relation: -n H2(gamma + mu_eps)", -leak),
        ("uncertainty relation slack: -delta_eps", -float(delta_eps)),
        ("max-entropy chain rule, lower form: -2 f_eps", -2 * f),
        ("min-entropy chain rule, upper form: -2 f_eps", -2 * f),
        ("max-entropy chain rule, upper form: -f_eps", -f),
        ("min-entropy chain rule, lower form: -f_eps", -f),
    ]
    value = k - leak - delta_eps - 6 * f
    return BoundReport(
        "expungement",
        {"n": n, "k": k, "gamma": gamma, "eps": eps, "mu_eps": mu_eps, "delta_eps": delta_eps},
        value, trace)


def weak_binding_delta(ell: int, epsilon_bind: float) -> BoundReport:
    """Weak-binding slack Delta in sum_c p_c <= 1 + Delta.

    ``value`` is the generic conversion 2^ell * eps (constant factor 1) for any
    protocol binding with parameter eps; the trace also records this
    protocol's own claim, Delta = 0.
    """
    if ell < 0 or epsilon_bind < 0:
        raise ValueError("inputs must be non-negative")
    generic = (2.0 ** ell) * epsilon_bind
    return BoundReport("weak_binding_delta", {"ell": ell, "epsilon_bind": epsilon_bind},
                       generic, [("generic 2^ell eps", generic), ("this protocol", 0.0)])
