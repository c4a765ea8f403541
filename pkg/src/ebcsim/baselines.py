"""One-trusted-node baselines.

* The one-qubit quantum protocol: Alice and Bob share (theta, k); Alice hands
  H^theta |b xor k> to a single trusted node, which forwards it to Bob on open
  or returns it to Alice on erase.
* A classical trusted-party protocol in which the commit transcript does not
  depend on b: Alice stores s = b xor k at the node and reveals k only on
  open.  Because nothing after an erase correlates with b it is hiding, and
  exactly that makes the equivocation attack below succeed every time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .adversary import wilson_interval
from .bits import ADVERSARY_STREAM, ALICE_STREAM, BOB_STREAM, derive_rng
from .params import Flag
from .protocol import ALICE, BOB, BROADCAST, QubitLedger, Transcript, node
from .quantum.symbolic import measure_in_basis, prepare_bb84

T1 = node(1)


@dataclass
class RateResult:
    trials: int
    successes: int
    rate: float
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "RateResult":
        lo, hi = wilson_interval(successes, trials)
        return cls(trials, successes, successes / trials, lo, hi)


@dataclass
class SimpleRun:
    outcome: object  # Bob's bit on open, Alice's flag on erase
    transcript: Transcript


def _simple_once(b: int, action: str, seed: int, run: int, dishonest_basis: bool = False) -> Tuple[SimpleRun, dict]:
    rng_a = derive_rng(seed, run, ALICE_STREAM, 0)
    theta, key = (int(v) for v in rng_a.integers(0, 2, size=2))
    tr = Transcript([ALICE, BOB, T1])
    ledger = QubitLedger(1, ALICE)
    tr.send(ALICE, BOB, "private", "theta_k", theta=theta, k=key)
    tr.end_step()
    basis = 1 - theta if dishonest_basis else theta
    qubit = prepare_bb84([b ^ key], [basis])
    ledger.move([0], ALICE, T1)
    tr.send(ALICE, T1, "qubits", "slice", positions=[0])
    tr.send(T1, BROADCAST, "broadcast", "ack")
    tr.end_step()
    if action == "open":
        tr.send(ALICE, BROADCAST, "broadcast", "open")
        ledger.move([0], T1, BOB)
        tr.send(T1, BOB, "qubits", "slice", positions=[0])
        bit = int(measure_in_basis(qubit, [theta], derive_rng(seed, run, BOB_STREAM, 1))[0])
        outcome = bit ^ key
        tr.outcomes["b_hat"] = str(outcome)
    elif action == "erase":
        tr.send(ALICE, BROADCAST, "broadcast", "erase")
        ledger.move([0], T1, ALICE)
        tr.send(T1, ALICE, "qubits", "slice", positions=[0])
        bit = int(measure_in_basis(qubit, [theta], derive_rng(seed, run, ALICE_STREAM, 2))[0])
        outcome = Flag.ERASE if bit == b ^ key else Flag.FAILURE
        tr.send(ALICE, BROADCAST, "broadcast", "flag", flag=outcome.value)
        tr.outcomes["F_A"] = outcome.value
    else:
        raise ValueError(f"unknown action {action!r}")
    tr.end_step()
    tr.holdings = ledger.summary()
    # what Bob and the node can pool afterwards: the node kept nothing
    return SimpleRun(outcome, tr), {"theta": theta, "k": key}


def simple_protocol_run(b: int, action: str, coalition_after: bool, seed: int,
                        trials: int = 10_000) -> Tuple[object, Optional[RateResult]]:
    """Run the one-qubit protocol once with bit ``b``; optionally measure how
    well Bob and the node together guess a uniformly random committed bit
    after ``action`` over ``trials`` runs."""
    run, _ = _simple_once(b, action, seed, 0)
    if not coalition_after:
        return run.outcome, None
    correct = 0
    for i in range(trials):
        rng = derive_rng(seed, i + 1, ADVERSARY_STREAM, 0)
        bit = int(rng.integers(0, 2))
        res, pooled = _simple_once(bit, action, seed, i + 1)
        if action == "open":
            guess = int(res.outcome)  # Bob learned b
        else:
            # (theta, k) are independent of b and the node returned the qubit
            guess = int(rng.integers(0, 2))
        correct += guess == bit
    return run.outcome, RateResult.from_counts(correct, trials)


def classical_commit(b: int, key: int) -> Transcript:
    tr = Transcript([ALICE, BOB, T1])
    tr.send(ALICE, T1, "private", "store", s=b ^ key)
    tr.send(T1, BROADCAST, "broadcast", "ack")
    tr.end_step()
    return tr


def classical_open(tr: Transcript, stored: int, announced_key: int) -> int:
    tr.send(ALICE, BROADCAST, "broadcast", "open")
    tr.send(ALICE, BOB, "private", "key", k=announced_key)
    tr.send(T1, BOB, "private", "reveal", s=stored)
    tr.end_step()
    b_hat = stored ^ announced_key
    tr.outcomes["b_hat"] = str(b_hat)
    return b_hat


def classical_equivocation_attack(seed: int, trials: int = 1000,
                                  honest: bool = False) -> RateResult:
    """Commit to 0, then open 1 by announcing the flipped key.

    With ``honest=True`` Alice opens the 0 she committed to instead; the
    rate is then how often Bob accepts the honest opening.
    """
    wins = 0
    for i in range(trials):
        key = int(derive_rng(seed, i, ALICE_STREAM, 0).integers(0, 2))
        tr = classical_commit(0, key)
        target = 0 if honest else 1
        announced = key ^ target  # makes s xor k' equal the target bit
        wins += classical_open(tr, 0 ^ key, announced) == target
    return RateResult.from_counts(wins, trials)


def classical_erase_coalition_accuracy(seed: int, trials: int = 1000) -> RateResult:
    """The trusted-party protocol with k shared up front: after an erase the
    node still has its copy of b xor k and Bob has k, so they recover b."""
    correct = 0
    for i in range(trials):
        rng = derive_rng(seed, i, ALICE_STREAM, 0)
        bit, key = (int(v) for v in rng.integers(0, 2, size=2))
        stored = bit ^ key
        correct += (stored ^ key) == bit
    return RateResult.from_counts(correct, trials)


def quantum_equivocation_attack(seed: int, trials: int = 10_000) -> RateResult:
    """The same attack against the one-qubit protocol.

    Bob already holds (theta, k), so Alice cannot re-announce a key; her only
    lever is the committed state.  To keep both openings possible she encodes
    in the conjugate basis, and Bob's theta-measurement then yields 1 with
    probability 1/2.
    """
    wins = 0
    for i in range(trials):
        res, _ = _simple_once(0, "open", seed, i, dishonest_basis=True)
        wins += int(res.outcome) == 1
    return RateResult.from_counts(wins, trials)
