from ebcsim.baselines import (classical_equivocation_attack, classical_erase_coalition_accuracy,
                              quantum_equivocation_attack, simple_protocol_run, _simple_once)
from ebcsim.params import Flag


def test_open_recovers_bit():
    for seed in range(40):
        for b in (0, 1):
            outcome, acc = simple_protocol_run(b, "open", False, seed)
            assert outcome == b and acc is None


def test_theta_zero_key_zero_measures_b_directly():
    # find a run with theta = 0, k = 0 and check the transcript
    for run in range(50):
        res, shared = _simple_once(1, "open", 3, run)
        if shared == {"theta": 0, "k": 0}:
            assert res.outcome == 1
            assert res.transcript.outcomes["b_hat"] == "1"
            return
    raise AssertionError("no theta=0, k=0 run found")


def test_honest_erase():
    outcome, _ = simple_protocol_run(1, "erase", False, 2)
    assert outcome is Flag.ERASE


def test_erase_coalition_accuracy():
    _, acc = simple_protocol_run(0, "erase", True, 4, trials=10_000)
    assert 0.49 <= acc.rate <= 0.51


def test_separation():
    classical = classical_erase_coalition_accuracy(5, 1000)
    assert classical.rate == 1.0


def test_classical_attack_and_honest_open():
    assert classical_equivocation_attack(6, 1000).rate == 1.0
    assert classical_equivocation_attack(6, 1000, honest=True).rate == 1.0


def test_quantum_attack_half():
    res = quantum_equivocation_attack(7, 10_000)
    assert abs(res.rate - 0.5) <= 0.02
