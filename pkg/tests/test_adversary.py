import numpy as np
import pytest

from ebcsim.adversary import (AdversaryStrategy, CoalitionSpec, CoalitionView, OutOfModelError,
                              binding_attack_exhaustive, commit_hiding_bound,
                              dense_binding_spot_check, erase_hiding_advantage,
                              exact_hiding_advantage, expungement_attack_run, flip_patterns,
                              hiding_advantage, local_hiding_check, open_hiding_advantage,
                              snoop_with_theta, weak_binding_sum, wilson_interval)
from ebcsim.bits import derive_rng
from ebcsim.codes import hamming_7_4, repetition_code, split_support_code
from ebcsim.extractor import leftover_hash_epsilon
from ebcsim.params import ProtocolParams
from ebcsim.protocol import AdversaryHooks, run_protocol


def test_flip_patterns_count():
    # 1 + 16 + C(16,2) = 137
    assert flip_patterns(16, 2).size == 137
    assert flip_patterns(16, 0).tolist() == [0]


def test_binding_budget_zero(params16, code16):
    assert binding_attack_exhaustive(params16, code16, 0).max_probability == 0.0


def test_binding_exhaustive(params16, code16):
    res = binding_attack_exhaustive(params16, code16, 2)
    assert res.max_probability == 0.0 and res.witness is None
    assert res.strings == 2 ** 16 and res.patterns == 137


def test_binding_breaks_when_threshold_too_large(params16, code16):
    res = binding_attack_exhaustive(params16, code16, 2, threshold=5)
    assert res.max_probability == 1.0
    s, e, x = res.witness
    words = [int("".join(map(str, w)), 2) for w in code16.codeword_table()]
    # the opened codeword is reachable, and it is not the one nearest to the commit
    assert bin((s ^ e) ^ words[x]).count("1") <= 5
    nearest = min(range(4), key=lambda j: (bin(s ^ words[j]).count("1"), j))
    assert nearest != x


def test_weak_binding_sum(params16, code16):
    assert weak_binding_sum(params16, code16, 2) == 1
    assert weak_binding_sum(params16, code16, 2, threshold=5) == 2


def test_dense_binding_spot_check():
    code = repetition_code(5)
    p = dense_binding_spot_check(code, threshold=1, corrupt=[0], trials=5, rng=derive_rng(0))
    assert p == 0.0


def test_out_of_model_refused(params16):
    with pytest.raises(OutOfModelError):
        AdversaryStrategy(corrupt_nodes=frozenset({1, 2})).validate(params16)
    AdversaryStrategy(corrupt_nodes=frozenset({1, 2}), out_of_model=True).validate(params16)


def test_exact_advantages(code16):
    assert exact_hiding_advantage(code16, 1, []) == pytest.approx(0.0)
    assert exact_hiding_advantage(code16, 1, [0, 1]) == pytest.approx(0.25)
    # complete information: real-or-random distance is 1 - 2^-ell
    assert exact_hiding_advantage(code16, 1, range(16)) == pytest.approx(0.5)
    code = hamming_7_4()
    assert exact_hiding_advantage(code, 2, range(7)) == pytest.approx(0.75)


def test_monotone_in_leaked_positions(code16):
    nested = [[], [0], [0, 6], [0, 6, 10], list(range(16))]
    vals = [exact_hiding_advantage(code16, 1, pos) for pos in nested]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_bob_alone_learns_nothing(params16, code16):
    est = hiding_advantage(params16, code16, CoalitionSpec(), 20_000, 1, experiment="bob")
    assert est.near_zero()


def test_all_nodes_with_bob_reconstruct(params16, code16):
    spec = CoalitionSpec(nodes=tuple(range(1, 9)))
    est = hiding_advantage(params16, code16, spec, 20_000, 2, experiment="everyone")
    assert abs(est.estimate - 0.5) <= 3 * max(est.sigma, est.null_sigma)


def test_bob_plus_one_node_matches_exact(params16, code16):
    spec = CoalitionSpec(nodes=(1,))
    est = hiding_advantage(params16, code16, spec, 50_000, 3,
                           bound=commit_hiding_bound(params16, spec))
    exact = exact_hiding_advantage(code16, 1, list(params16.node_positions(1)))
    assert abs(est.estimate - exact) <= 3 * max(est.sigma, est.null_sigma)
    assert est.within_bound()
    assert est.bound == leftover_hash_epsilon(0, 1)


def test_engine_and_batch_agree(params16, code16):
    spec = CoalitionSpec(nodes=(1,))
    eng = hiding_advantage(params16, code16, spec, 2000, 4, source="engine")
    exact = exact_hiding_advantage(code16, 1, list(params16.node_positions(1)))
    assert abs(eng.estimate - exact) <= 3 * max(eng.sigma, eng.null_sigma)


def test_erase_and_open(params16, code16):
    erase = erase_hiding_advantage(params16, code16, [1], 20_000, 5)
    opened = open_hiding_advantage(params16, code16, [1], 20_000, 5)
    assert opened.estimate <= erase.estimate + 3 * max(erase.sigma, erase.null_sigma)
    assert erase.within_bound() and opened.within_bound()
    p0 = ProtocolParams(16, 8, 0, 0.0, 2, 10, 1)
    assert erase_hiding_advantage(p0, code16, [], 20_000, 6).near_zero()


def test_local_hiding(code16, params16):
    one_each = ProtocolParams(16, 16, 0, 0.0, 2, 10, 1)
    assert local_hiding_check(one_each, code16, 1, 20_000, 7).near_zero()
    assert local_hiding_check(params16, code16, 4, 20_000, 7).near_zero()
    leaked = local_hiding_check(params16, code16, 1, 20_000, 7, leak=("z", "r"))
    exact = exact_hiding_advantage(code16, 1, list(params16.node_positions(1)))
    assert abs(leaked.estimate - exact) <= 3 * max(leaked.sigma, leaked.null_sigma)
    assert leaked.estimate > 0.1


def test_wilson_interval_contains_estimate():
    lo, hi = wilson_interval(30, 100)
    assert lo < 0.3 < hi


def test_snooping_is_undetected(params16, code16):
    hooks = AdversaryHooks(corrupt_nodes={1}, node_tamper=snoop_with_theta)
    state, res = run_protocol(params16, code16, 8, "erase", hooks)
    view = CoalitionView.from_run(state, {"bob", "T1"})
    mask, vals = view.known_y()
    assert mask.sum() == 2
    assert np.array_equal(vals[mask], state.alice["y"].bits[mask])
    assert res.distance == 0


def test_expungement_small():
    p = ProtocolParams(64, 8, 1, 0.0, 2, 33, 1)
    code = split_support_code(64, 43)
    res = expungement_attack_run(p, code, 300, 9)
    assert res.measured == 64
    assert abs(res.accept_rate - res.exact_accept) <= 3 * np.sqrt(
        res.exact_accept * (1 - res.exact_accept) / 300) + 1 / 300
    honest = expungement_attack_run(p, code, 200, 9, fraction=0.0)
    assert honest.accept_rate == 1.0 and honest.exact_accept == 1.0
    assert honest.advantage_accepted.near_zero()


def test_expungement_partial_tradeoff():
    p = ProtocolParams(64, 8, 1, 0.0, 2, 33, 1)
    code = split_support_code(64, 43)
    res = expungement_attack_run(p, code, 400, 10, fraction=0.25)
    assert res.measured == 16 and res.exact_accept > 0.9
    assert res.accept_rate >= 0.9
    adv = res.advantage_accepted
    # measured positions known half the time; bound from the leftover hash lemma on what is left
    assert adv.estimate <= leftover_hash_epsilon(p.k - res.measured, p.ell) + 3 * max(adv.sigma, adv.null_sigma)
