"""Protocol parameters, flags and parameter validation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

# Asymptotic Gilbert-Varshamov regime for the corruption rate t/m + gamma.
GV_REGIME_LIMIT = 0.083


class Flag(str, enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    ERASE = "erase"


@dataclass(frozen=True)
class ProtocolParams:
    """Parameters of one protocol instance.

    ``delta_c`` and ``delta_prime`` are optional: for desk-scale codes they are
    derived from ``(k, ell, accept_threshold)`` rather than fixed up front.
    """

    n: int
    m: int
    t: int
    gamma: float
    k: int
    d: int
    ell: int
    delta_c: Optional[float] = None
    delta_prime: Optional[float] = None

    @property
    def corruption_rate(self) -> float:
        return self.t / self.m + self.gamma

    @property
    def accept_threshold(self) -> int:
        # Exact rational arithmetic so that e.g. gamma=0.1, n=70 floors to 7, not 6.
        rate = Fraction(self.t, self.m) + Fraction(str(self.gamma))
        return math.floor(rate * self.n)

    @property
    def slice_size(self) -> int:
        return self.n // self.m

    @property
    def required_distance(self) -> int:
        rate = Fraction(self.t, self.m) + Fraction(str(self.gamma))
        return math.ceil(4 * rate * self.n + 1)

    @property
    def derived_delta_c(self) -> float:
        return self.ell / self.n if self.delta_c is None else self.delta_c

    @property
    def derived_delta_prime(self) -> float:
        if self.delta_prime is not None:
            return self.delta_prime
        return (self.k - self.accept_threshold - self.ell) / self.n

    def node_positions(self, node: int) -> range:
        """Qubit positions sent to trusted node ``node`` (1-based)."""
        if not 1 <= node <= self.m:
            raise ValueError(f"node index {node} outside 1..{self.m}")
        s = self.slice_size
        return range((node - 1) * s, node * s)


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    gv_regime: bool = True
    asymptotic_rate_holds: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_params(p: ProtocolParams) -> ValidationReport:
    """Check the parameter constraints; violations are reported, never raised."""
    report = ValidationReport()
    v = report.violations
    if p.n <= 0 or p.m <= 0:
        v.append("n and m must be positive")
        return report
    if p.n % p.m:
        v.append(f"n={p.n} not divisible by m={p.m}")
    if not 0 <= p.t <= p.m:
        v.append(f"t={p.t} outside 0..m")
    if not 0 <= p.gamma < 1:
        v.append(f"gamma={p.gamma} outside [0, 1)")
    if p.d < p.required_distance:
        v.append(f"d={p.d} below required {p.required_distance} = 4(t/m+gamma)n+1")
    if p.ell > p.k:
        v.append(f"ell={p.ell} exceeds k={p.k}")
    if p.ell < 0 or p.k < 0:
        v.append("k and ell must be non-negative")
    report.gv_regime = p.corruption_rate <= GV_REGIME_LIMIT
    # k = (t/m + gamma + delta_c + delta') n with both deltas positive
    report.asymptotic_rate_holds = (
        p.derived_delta_c > 0 and p.derived_delta_prime > 0)
    return report
