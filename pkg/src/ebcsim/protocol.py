"""Three-phase erasable commitment over a simulated network.

Parties are Alice, Bob and trusted nodes ``T1..Tm`` connected by private
authenticated pairwise channels plus a broadcast channel.  Rounds are
lock-step: every round ends with a broadcast end-of-step marker.  Trusted
nodes not listed as corrupt are honest-but-curious with delta = 0: they
store and forward their qubit slice untouched and log only classical
metadata (which positions they held and when).

Adversarial behaviour enters only through :class:`AdversaryHooks`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .bits import (ADVERSARY_STREAM, ALICE_STREAM, BOB_STREAM, CHANNEL_STREAM, NODE_BASE,
                   BitLike, BitString, as_bits, derive_rng, hamming_distance, sample_uniform)
from .codes import LinearCode, encode
from .extractor import extract, seed_length
from .params import Flag, ProtocolParams, validate_params
from .quantum.symbolic import Bb84Register, apply_depolarizing, measure_in_basis, merge, prepare_bb84


class ProtocolError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class PartyId:
    role: str
    index: int = 0

    def __str__(self) -> str:
        return f"T{self.index}" if self.role == "trusted" else self.role


ALICE = PartyId("alice")
BOB = PartyId("bob")
BROADCAST = PartyId("broadcast")


def node(i: int) -> PartyId:
    return PartyId("trusted", i)


@dataclass(frozen=True)
class Message:
    step: int
    sender: PartyId
    receiver: PartyId
    kind: str  # "private", "qubits" or "broadcast"
    label: str
    payload: Tuple[Tuple[str, str], ...] = ()

    def payload_digest(self) -> str:
        blob = json.dumps(self.payload, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def record(self, full: bool = False) -> Dict[str, Any]:
        rec = {"step": self.step, "from": str(self.sender), "to": str(self.receiver),
               "kind": self.kind, "label": self.label, "payload_digest": self.payload_digest()}
        if full:
            rec["payload"] = dict(self.payload)
        return rec


class Transcript:
    """Append-only message log with per-party views and phase outcomes.

    ``events`` holds simulator-side notes (such as a corrupt node altering
    its qubits) that no party sees.
    """

    def __init__(self, parties: Sequence[PartyId]):
        self.parties = tuple(parties)
        self.messages: List[Message] = []
        self.views: Dict[PartyId, List[int]] = {p: [] for p in self.parties}
        self.outcomes: Dict[str, str] = {}
        self.holdings: Dict[str, str] = {}
        self.events: List[Dict[str, str]] = []
        self.step = 0

    def send(self, sender: PartyId, receiver: PartyId, kind: str, label: str,
             **payload: Any) -> Message:
        msg = Message(self.step, sender, receiver, kind, label,
                      tuple((k, _text(v)) for k, v in payload.items()))
        idx = len(self.messages)
        self.messages.append(msg)
        if receiver == BROADCAST:
            for p in self.parties:
                self.views[p].append(idx)
        else:
            self.views[sender].append(idx)
            self.views[receiver].append(idx)
        return msg

    def note(self, party: PartyId, label: str, **info: Any) -> None:
        self.events.append({"step": str(self.step), "party": str(party), "label": label,
                            **{k: _text(v) for k, v in info.items()}})

    def end_step(self, who: PartyId = ALICE) -> None:
        self.send(who, BROADCAST, "broadcast", "end-of-step")
        self.step += 1

    def view_of(self, party: PartyId) -> List[Message]:
        return [self.messages[i] for i in self.views[party]]

    def broadcasts(self, label: Optional[str] = None) -> List[Message]:
        return [m for m in self.messages
                if m.kind == "broadcast" and (label is None or m.label == label)]

    def records(self, full: bool = False) -> List[Dict[str, Any]]:
        return [m.record(full) for m in self.messages]

    def to_jsonl(self, full: bool = False) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.records(full)]
        lines.append(json.dumps({"outcomes": self.outcomes, "holdings": self.holdings,
                                 "events": self.events}, sort_keys=True))
        return "\n".join(lines) + "\n"


def _text(v: Any) -> str:
    if isinstance(v, BitString):
        return v.to_str()
    if isinstance(v, (list, tuple, range, np.ndarray)):
        return ",".join(str(int(p)) for p in v)
    return str(v)


class QubitLedger:
    """Tracks which party holds each qubit position; moving a qubit the
    sender does not hold is an error, so no position can be duplicated."""

    def __init__(self, n: int, holder: PartyId):
        self.holder = [holder] * n

    def move(self, positions: Sequence[int], src: PartyId, dst: PartyId) -> None:
        for p in positions:
            if self.holder[int(p)] != src:
                raise ProtocolError(f"{src} does not hold qubit {p} (held by {self.holder[int(p)]})")
        for p in positions:
            self.holder[int(p)] = dst

    def held_by(self, party: PartyId) -> List[int]:
        return [i for i, h in enumerate(self.holder) if h == party]

    def summary(self) -> Dict[str, str]:
        out: Dict[str, List[int]] = {}
        for i, h in enumerate(self.holder):
            out.setdefault(str(h), []).append(i)
        return {k: _text(v) for k, v in sorted(out.items())}


@dataclass
class AdversaryContext:
    """What a hook gets: its rng, the run state and a scratch memory that
    survives the run (what the adversary retains for later collusion)."""

    state: "CommitState"
    rng: np.random.Generator
    memory: Dict[str, Any]


NodeHook = Callable[[int, str, Bb84Register, AdversaryContext], Bb84Register]


@dataclass
class AdversaryHooks:
    """Adversarial behaviour for one run.

    node_tamper
        Called for each corrupt node with phase ``"commit"`` right after it
        receives its slice, and with ``"open"``/``"erase"`` before it sends the
        slice on.  Returns the register to keep or forward.
    alice_encode
        Dishonest Alice: receives Alice's sampled values and returns the string
        ``u`` actually prepared.
    alice_open
        Dishonest Alice: returns the message ``x`` sent to Bob at open.
    distribute
        Replaces the list of per-node position arrays Alice sends.
    depolarizing_eps, noise_hops
        Channel noise; hops are ``"distribute"`` (Alice to nodes) and
        ``"forward"`` (nodes to Bob or back to Alice).
    """

    corrupt_nodes: FrozenSet[int] = frozenset()
    node_tamper: Optional[NodeHook] = None
    alice_encode: Optional[Callable[[Dict[str, BitString]], BitLike]] = None
    alice_open: Optional[Callable[["CommitState"], BitLike]] = None
    distribute: Optional[Callable[[List[np.ndarray]], List[np.ndarray]]] = None
    depolarizing_eps: float = 0.0
    noise_hops: Tuple[str, ...] = ("distribute",)

    def __post_init__(self):
        self.corrupt_nodes = frozenset(self.corrupt_nodes)


HONEST = AdversaryHooks()


@dataclass
class CommitState:
    params: ProtocolParams
    code: LinearCode
    seed: int
    run: int
    hooks: AdversaryHooks
    alice: Dict[str, BitString]
    bob: Dict[str, BitString]
    node_registers: Dict[int, Bb84Register]
    node_log: Dict[int, List[Tuple[int, str]]]
    acks: FrozenSet[PartyId]
    deviations: List[Tuple[int, str]]
    ledger: QubitLedger
    transcript: Transcript
    adversary_memory: Dict[str, Any]
    commit_flag: Optional[Flag] = None  # FAILURE if the commit aborted
    finished: bool = False

    @property
    def c(self) -> BitString:
        return self.alice["c"]


@dataclass
class PhaseResult:
    phase: str
    c_hat: BitString
    flag_a: Flag
    flag_b: Flag
    distance: Optional[int]
    transcript: Transcript


def _stream(state: CommitState, stream: int, phase: int) -> np.random.Generator:
    return derive_rng(state.seed, state.run, stream, phase)


def run_commit(params: ProtocolParams, code: LinearCode, seed: int,
               hooks: Optional[AdversaryHooks] = None, run: int = 0,
               check_params: bool = True) -> Tuple[CommitState, Transcript]:
    """Commit phase: sample, encode, hand (z, r, theta) to Bob, spread the qubits."""
    hooks = hooks or HONEST
    if check_params:
        report = validate_params(params)
        if not report.ok:
            raise ProtocolError("invalid parameters: " + "; ".join(report.violations))
    if (code.n, code.k) != (params.n, params.k) or code.d < params.d:
        raise ProtocolError(f"{code!r} does not match n={params.n}, k={params.k}, d={params.d}")
    if any(not 1 <= i <= params.m for i in hooks.corrupt_nodes):
        raise ProtocolError("corrupt node index outside 1..m")

    n, m = params.n, params.m
    nodes = [node(i) for i in range(1, m + 1)]
    tr = Transcript([ALICE, BOB] + nodes)
    ledger = QubitLedger(n, ALICE)

    rng_a = derive_rng(seed, run, ALICE_STREAM, 0)
    x = sample_uniform(params.k, rng_a)
    z = sample_uniform(n, rng_a)
    r = sample_uniform(seed_length(params.k, params.ell), rng_a)
    theta = sample_uniform(n, rng_a)
    c = extract(x, r, params.ell)
    y = encode(code, x)
    u = y ^ z
    alice = {"x": x, "z": z, "r": r, "theta": theta, "c": c, "y": y, "u": u}
    state = CommitState(params, code, seed, run, hooks, alice, {}, {}, {i: [] for i in range(1, m + 1)},
                        frozenset(), [], ledger, tr, {})

    if hooks.alice_encode is not None:
        u_sent = BitString(hooks.alice_encode(dict(alice)))
        if len(u_sent) != n:
            raise ProtocolError("alice_encode must return n bits")
        alice["u_sent"] = u_sent
    else:
        u_sent = u

    tr.send(ALICE, BOB, "private", "z_r_theta", z=z, r=r, theta=theta)
    state.bob = {"z": z, "r": r, "theta": theta}
    tr.send(BOB, BROADCAST, "broadcast", "ack")
    acks = {BOB}
    tr.end_step()

    psi = prepare_bb84(u_sent, theta)
    slices = [np.asarray(params.node_positions(i)) for i in range(1, m + 1)]
    if hooks.distribute is not None:
        slices = [np.asarray(s, dtype=np.int64) for s in hooks.distribute(slices)]
    rng_ch = _stream(state, CHANNEL_STREAM, 0)
    for i, pos in enumerate(slices, start=1):
        ledger.move(pos, ALICE, node(i))
        reg = psi.select_positions(pos) if len(pos) else psi.take([])
        if hooks.depolarizing_eps and "distribute" in hooks.noise_hops:
            reg = apply_depolarizing(reg, hooks.depolarizing_eps, rng_ch)
        tr.send(ALICE, node(i), "qubits", "slice", positions=pos)
        state.node_registers[i] = reg
        state.node_log[i].append((tr.step, _text(pos)))
    if ledger.held_by(ALICE):
        raise ProtocolError(f"Alice kept qubits {ledger.held_by(ALICE)} after distribution")

    for i in range(1, m + 1):
        got = state.node_registers[i].n
        if got != params.slice_size:
            # payload shape check: announce and withhold the acknowledgment
            state.deviations.append((i, f"received {got} qubits, expected {params.slice_size}"))
            tr.send(node(i), BROADCAST, "broadcast", "deviation", received=got,
                    expected=params.slice_size)
        else:
            tr.send(node(i), BROADCAST, "broadcast", "ack")
            acks.add(node(i))
    rng_adv = _stream(state, ADVERSARY_STREAM, 0)
    for i in sorted(hooks.corrupt_nodes):
        if hooks.node_tamper is not None:
            ctx = AdversaryContext(state, rng_adv, state.adversary_memory)
            before = state.node_registers[i]
            state.node_registers[i] = hooks.node_tamper(i, "commit", before, ctx)
            if not state.node_registers[i].same_state(before):
                tr.note(node(i), "tampered", phase="commit")
    tr.end_step()

    state.acks = frozenset(acks)
    if len(acks) < m + 1:
        state.commit_flag = Flag.FAILURE
        tr.outcomes["commit"] = Flag.FAILURE.value
    else:
        tr.outcomes["c"] = c.to_str()
        tr.outcomes["commit"] = "complete"
    tr.holdings = ledger.summary()
    return state, tr


def _collect(state: CommitState, dest: PartyId, phase: str, phase_id: int) -> Bb84Register:
    hooks, tr = state.hooks, state.transcript
    rng_adv = _stream(state, ADVERSARY_STREAM, phase_id)
    rng_ch = _stream(state, CHANNEL_STREAM, phase_id)
    regs = []
    for i in range(1, state.params.m + 1):
        stored = state.node_registers[i]
        if i in hooks.corrupt_nodes and hooks.node_tamper is not None:
            ctx = AdversaryContext(state, rng_adv, state.adversary_memory)
            out = hooks.node_tamper(i, phase, stored, ctx)
            if not out.same_state(stored):
                tr.note(node(i), "tampered", phase=phase)
        else:
            out = stored
        if i not in hooks.corrupt_nodes and out is not stored:
            raise ProtocolError(f"honest node T{i} altered its slice")
        if hooks.depolarizing_eps and "forward" in hooks.noise_hops:
            out = apply_depolarizing(out, hooks.depolarizing_eps, rng_ch)
        pos = [int(p) for p in out.positions]
        state.ledger.move(pos, node(i), dest)
        tr.send(node(i), dest, "qubits", "slice", positions=pos)
        state.node_log[i].append((tr.step, _text(pos)))
        regs.append(out)
        del state.node_registers[i]
    got = merge(regs) if regs else None
    if got is None or got.n != state.params.n:
        raise ProtocolError("qubits lost in transit")
    return got


def _check_ready(state: CommitState) -> None:
    if state.commit_flag is Flag.FAILURE:
        raise ProtocolError("commit phase aborted; nothing to open or erase")
    if state.finished:
        raise ProtocolError("this commitment was already opened or erased")


def run_open(state: CommitState) -> PhaseResult:
    """Open phase: nodes forward to Bob, who measures in theta and checks the distance."""
    _check_ready(state)
    p, tr = state.params, state.transcript
    x = state.alice["x"]
    if state.hooks.alice_open is not None:
        x = BitString(state.hooks.alice_open(state))
    tr.send(ALICE, BROADCAST, "broadcast", "open")
    tr.send(ALICE, BOB, "private", "x", x=x)
    state.bob["x"] = x
    tr.end_step()

    psi = _collect(state, BOB, "open", 1)
    tr.end_step()

    u_hat = measure_in_basis(psi, state.bob["theta"], _stream(state, BOB_STREAM, 1))
    y_hat = u_hat ^ state.bob["z"]
    h = hamming_distance(y_hat, encode(state.code, x))
    if h > p.accept_threshold:
        c_hat, flag_b = BitString.zeros(p.ell), Flag.FAILURE
    else:
        c_hat, flag_b = extract(x, state.bob["r"], p.ell), Flag.SUCCESS
    state.bob.update(u_hat=u_hat, c_hat=c_hat)
    tr.send(BOB, BROADCAST, "broadcast", "flag", flag=flag_b.value)
    tr.end_step(BOB)
    flag_a = flag_b
    state.finished = True
    tr.outcomes.update(c_hat=c_hat.to_str(), F_A=flag_a.value, F_B=flag_b.value, h=str(h))
    tr.holdings = state.ledger.summary()
    return PhaseResult("open", c_hat, flag_a, flag_b, h, tr)


def run_erase(state: CommitState) -> PhaseResult:
    """Erase phase: nodes return the qubits; Alice checks them against y."""
    _check_ready(state)
    p, tr = state.params, state.transcript
    tr.send(ALICE, BROADCAST, "broadcast", "erase")
    tr.end_step()

    psi = _collect(state, ALICE, "erase", 2)
    tr.end_step()

    u_hat = measure_in_basis(psi, state.alice["theta"], _stream(state, ALICE_STREAM, 2))
    y_hat = u_hat ^ state.alice["z"]
    h = hamming_distance(y_hat, state.alice["y"])
    flag_a = Flag.FAILURE if h > p.accept_threshold else Flag.ERASE
    # the erase flag broadcast is Alice's own F_A
    tr.send(ALICE, BROADCAST, "broadcast", "flag", flag=flag_a.value)
    tr.end_step()
    flag_b = flag_a
    c_hat = BitString.zeros(p.ell)
    state.bob["c_hat"] = c_hat
    state.finished = True
    tr.outcomes.update(c_hat=c_hat.to_str(), F_A=flag_a.value, F_B=flag_b.value, h=str(h))
    tr.holdings = state.ledger.summary()
    return PhaseResult("erase", c_hat, flag_a, flag_b, h, tr)


def run_protocol(params: ProtocolParams, code: LinearCode, seed: int, phase: str = "open",
                 hooks: Optional[AdversaryHooks] = None, run: int = 0,
                 check_params: bool = True) -> Tuple[CommitState, Optional[PhaseResult]]:
    """Commit followed by ``phase``; the result is None when the commit aborted."""
    state, _ = run_commit(params, code, seed, hooks, run, check_params)
    if state.commit_flag is Flag.FAILURE:
        return state, None
    if phase == "open":
        return state, run_open(state)
    if phase == "erase":
        return state, run_erase(state)
    raise ValueError(f"unknown phase {phase!r}")
