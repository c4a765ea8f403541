import itertools
import json

import numpy as np
import pytest

from ebcsim.bits import BitString
from ebcsim.codes import split_support_code
from ebcsim.extractor import extract
from ebcsim.params import Flag, ProtocolParams
from ebcsim.protocol import (ALICE, BOB, AdversaryHooks, ProtocolError, QubitLedger, Transcript,
                             node, run_commit, run_erase, run_open, run_protocol)
from ebcsim.quantum.symbolic import Flip, Replace, corrupt_positions


def flip_hook(per_node):
    """Corrupt nodes flip the given local indices of their slice at commit."""
    def hook(i, phase, reg, ctx):
        if phase != "commit":
            return reg
        return corrupt_positions(reg, [int(reg.positions[j]) for j in per_node.get(i, [])], Flip())
    return hook


def test_honest_commit(params16, code16):
    state, tr = run_commit(params16, code16, seed=1)
    assert state.commit_flag is None
    assert len(state.acks) == params16.m + 1
    assert state.c == extract(state.alice["x"], state.alice["r"], params16.ell)
    held = [state.ledger.held_by(node(i)) for i in range(1, 9)]
    assert sorted(itertools.chain(*held)) == list(range(16))
    assert all(len(h) == 2 for h in held)


def test_replacing_hook_is_noted_but_commit_completes(params16, code16):
    def replace(i, phase, reg, ctx):
        if phase != "commit":
            return reg
        return corrupt_positions(reg, list(reg.positions), Replace(1, 1))
    hooks = AdversaryHooks(corrupt_nodes={1}, node_tamper=replace)
    state, tr = run_commit(params16, code16, 2, hooks)
    assert state.commit_flag is None
    assert any(e["label"] == "tampered" and e["party"] == "T1" for e in tr.events)
    assert "tampered" in tr.to_jsonl()


def test_oversized_slice_is_announced(params16, code16):
    def distribute(slices):
        moved = list(slices)
        moved[1] = np.concatenate([slices[1], slices[2][:1]])
        moved[2] = slices[2][1:]
        return moved
    state, tr = run_commit(params16, code16, 3, AdversaryHooks(distribute=distribute))
    devs = tr.broadcasts("deviation")
    assert {str(m.sender) for m in devs} == {"T2", "T3"}
    assert state.commit_flag is Flag.FAILURE
    with pytest.raises(ProtocolError):
        run_open(state)


def test_honest_open_and_erase(params16, code16):
    for seed in range(20):
        state, res = run_protocol(params16, code16, seed, "open")
        assert res.flag_b is Flag.SUCCESS and res.flag_a is res.flag_b and res.c_hat == state.c
        state, res = run_protocol(params16, code16, seed, "erase")
        assert res.flag_a is Flag.ERASE and res.flag_b is Flag.ERASE
        assert res.c_hat.to_str() == "0" * params16.ell


def test_flips_within_threshold_still_open(params16, code16):
    hooks = AdversaryHooks(corrupt_nodes={3}, node_tamper=flip_hook({3: [0, 1]}))
    for seed in range(10):
        state, res = run_protocol(params16, code16, seed, "open", hooks)
        assert res.distance == 2 and res.flag_b is Flag.SUCCESS and res.c_hat == state.c


def test_flips_above_threshold_fail_erase(code16):
    p = ProtocolParams(16, 8, 1, 0.0, 2, 10, 1)
    hooks = AdversaryHooks(corrupt_nodes={1, 2}, node_tamper=flip_hook({1: [0, 1], 2: [0]}))
    state, res = run_protocol(p, code16, 0, "erase", hooks, check_params=False)
    assert res.distance == 3 and res.flag_a is Flag.FAILURE


def test_open_wrong_message_rejected(params16, code16):
    # Alice opens x~ != x with up to 2 corrupt qubits flipped toward Enc(x~)
    tau = params16.accept_threshold
    for seed in range(8):
        state, _ = run_commit(params16, code16, seed)
        x = state.alice["x"]
        for other in range(4):
            x_t = BitString.from_int(other, 2)
            if x_t == x:
                continue
            y_t = code16.encode(x_t)
            diff = np.flatnonzero((state.alice["y"] ^ y_t).bits)
            for pos in itertools.combinations(diff, tau):
                s, _ = run_commit(params16, code16, seed)
                for i in s.node_registers:
                    reg = s.node_registers[i]
                    mine = [p for p in pos if p in set(reg.positions.tolist())]
                    s.node_registers[i] = corrupt_positions(reg, mine, Flip())
                s.hooks = AdversaryHooks(alice_open=lambda st, v=x_t: v)
                res = run_open(s)
                assert res.flag_b is Flag.FAILURE
                assert res.distance >= code16.d - 2 * tau > tau
                break


def test_qubit_conservation(params16, code16):
    ledger = QubitLedger(4, ALICE)
    ledger.move([0, 1], ALICE, BOB)
    with pytest.raises(ProtocolError):
        ledger.move([0], ALICE, BOB)
    state, res = run_protocol(params16, code16, 4, "open")
    assert state.ledger.held_by(BOB) == list(range(16))
    assert json.loads(res.transcript.to_jsonl().splitlines()[-1])["holdings"] == {"bob": ",".join(map(str, range(16)))}


def test_honest_nodes_store_and_forward(params16, code16):
    from ebcsim.quantum.symbolic import prepare_bb84
    state, _ = run_commit(params16, code16, 5)
    sent = prepare_bb84(state.alice["u"], state.alice["theta"])
    for i, reg in state.node_registers.items():
        assert reg.same_state(sent.select_positions(params16.node_positions(i)))
    # hooks only ever run for corrupt nodes
    hooks = AdversaryHooks(corrupt_nodes=frozenset(), node_tamper=lambda *a: 1 / 0)
    _, res = run_protocol(params16, code16, 5, "open", hooks)
    assert res.flag_b is Flag.SUCCESS


def test_finished_commitment_cannot_be_reused(params16, code16):
    state, _ = run_protocol(params16, code16, 6, "open")
    with pytest.raises(ProtocolError):
        run_erase(state)


def test_determinism(params16, code16):
    hooks = AdversaryHooks(depolarizing_eps=0.1)
    a = run_protocol(params16, code16, 9, "erase", hooks, run=3)[1].transcript.to_jsonl(full=True)
    b = run_protocol(params16, code16, 9, "erase", hooks, run=3)[1].transcript.to_jsonl(full=True)
    c = run_protocol(params16, code16, 9, "erase", hooks, run=4)[1].transcript.to_jsonl(full=True)
    assert a == b and a != c


def test_views_and_broadcasts(params16, code16):
    state, res = run_protocol(params16, code16, 1, "open")
    tr = res.transcript
    t1 = tr.view_of(node(1))
    assert not any(m.label == "z_r_theta" for m in t1)
    assert any(m.label == "z_r_theta" for m in tr.view_of(BOB))
    assert all(m.kind == "broadcast" for m in tr.broadcasts())
    full = tr.to_jsonl(full=True).splitlines()
    assert "payload" in json.loads(full[0]) and "payload" not in json.loads(tr.to_jsonl().splitlines()[0])


def test_invalid_params_rejected(code16):
    with pytest.raises(ProtocolError):
        run_commit(ProtocolParams(16, 8, 2, 0.0, 2, 10, 1), code16, 0)
