"""Adversary strategies and the experiments behind the security claims.

Hiding experiments play a real-or-random game: the distinguisher sees the
coalition's classical view plus a string that is either Alice's ``c`` or a
fresh uniform one, and answers with the Bayes-optimal rule computed from the
exact posterior of ``c`` given the view.  ``2 * Pr[correct] - 1`` then
estimates the total-variation distance between the two joint distributions.
With full knowledge of ``c`` this distance is ``1 - 2**-ell``, not 1.

The views are classical (known positions of y, and z, r, theta when held),
so the estimate equals the quantum guessing advantage for BB84-diagonal
strategies and is only a lower bound for general quantum attacks.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import binom, binomtest

from .bits import BitString, derive_rng
from .codes import LinearCode, message_table
from .extractor import extract_batch, seed_length
from .params import Flag, ProtocolParams
from .protocol import (ALICE, BOB, AdversaryContext, AdversaryHooks, CommitState, Message,
                       PartyId, ProtocolError, node, run_protocol)
from .quantum.symbolic import Bb84Register, MeasureAndResend, corrupt_positions, measure_and_collapse

CONFIDENCE = 0.99


class OutOfModelError(ValueError):
    pass


@dataclass(frozen=True)
class AdversaryStrategy:
    """Who is corrupt during the run and who pools views afterwards."""

    corrupt_nodes: FrozenSet[int] = frozenset()
    colludes_with_bob: bool = True
    coalition: FrozenSet[str] = frozenset({"bob"})
    out_of_model: bool = False

    def validate(self, params: ProtocolParams) -> None:
        if len(self.corrupt_nodes) > params.t and not self.out_of_model:
            raise OutOfModelError(
                f"{len(self.corrupt_nodes)} corrupt nodes exceed t={params.t}; "
                "mark the run out_of_model to allow it")


# --------------------------------------------------------------------------
# views

@dataclass
class CoalitionView:
    """Merged classical knowledge of a coalition after a run.

    ``u_known`` maps qubit position to the value of u the members recorded.
    """

    members: FrozenSet[str]
    n: int
    u_known: Dict[int, int] = field(default_factory=dict)
    z: Optional[BitString] = None
    r: Optional[BitString] = None
    theta: Optional[BitString] = None
    x: Optional[BitString] = None
    messages: List[Message] = field(default_factory=list)

    def known_y(self) -> Tuple[np.ndarray, np.ndarray]:
        """Mask and values of the positions of y the coalition can compute."""
        mask = np.zeros(self.n, dtype=bool)
        vals = np.zeros(self.n, dtype=np.uint8)
        if self.z is None:
            return mask, vals
        for p, b in self.u_known.items():
            mask[p] = True
            vals[p] = b ^ self.z[p]
        return mask, vals

    @classmethod
    def from_run(cls, state: CommitState, members: Iterable[str]) -> "CoalitionView":
        """Collect what ``members`` ("bob", "T1", ...) received or retained."""
        members = frozenset(members)
        view = cls(members, state.params.n)
        parties: List[PartyId] = []
        if "bob" in members:
            parties.append(BOB)
            view.z, view.r, view.theta = state.bob["z"], state.bob["r"], state.bob["theta"]
            view.x = state.bob.get("x")
        mem = state.adversary_memory.get("u_known", {})
        for name in members:
            if name.startswith("T"):
                i = int(name[1:])
                parties.append(node(i))
                view.u_known.update(mem.get(i, {}))
        seen = set()
        for party in parties:
            for idx in state.transcript.views[party]:
                if idx not in seen:
                    seen.add(idx)
                    view.messages.append(state.transcript.messages[idx])
        return view


def snoop_with_theta(node_index: int, phase: str, reg: Bb84Register,
                     ctx: AdversaryContext) -> Bb84Register:
    """Corrupt node that got theta from a colluding Bob: measuring in the
    right basis learns u without disturbing the qubits."""
    if phase != "commit":
        return reg
    theta = ctx.state.bob["theta"]
    basis = np.asarray([theta[int(p)] for p in reg.positions], dtype=np.uint8)
    outcome, collapsed = measure_and_collapse(reg, basis, ctx.rng)
    known = ctx.memory.setdefault("u_known", {}).setdefault(node_index, {})
    for p, b in zip(reg.positions, outcome):
        known[int(p)] = int(b)
    return collapsed


def blind_measure_resend(fraction: float):
    """Hook factory: each node measures ``fraction`` of its qubits in random
    bases and resends; it records (basis, outcome) for later pooling."""
    def hook(node_index: int, phase: str, reg: Bb84Register, ctx: AdversaryContext) -> Bb84Register:
        if phase != "commit" or reg.n == 0:
            return reg
        count = int(round(fraction * reg.n))
        chosen = np.sort(ctx.rng.choice(reg.n, size=count, replace=False)) if count else np.array([], int)
        pos = reg.positions[chosen]
        bases = ctx.rng.integers(0, 2, size=count, dtype=np.uint8)
        after = corrupt_positions(reg, pos, MeasureAndResend(bases), ctx.rng)
        rec = ctx.memory.setdefault("blind", {}).setdefault(node_index, {})
        for j, p in zip(chosen, pos):
            rec[int(p)] = (int(after.cur_basis[j]), int(after.cur_bit[j]))
        return after
    return hook


# --------------------------------------------------------------------------
# real-or-random game

@dataclass
class AdvantageEstimate:
    experiment: str
    trials: int
    correct: int
    estimate: float
    ci_low: float
    ci_high: float
    sigma: float
    mean_view_tv: float
    bound: Optional[float] = None

    @property
    def null_sigma(self) -> float:
        """Standard deviation of the estimate when the true advantage is 0."""
        return 1.0 / np.sqrt(self.trials)

    def within_bound(self, slack_sigmas: float = 3.0) -> bool:
        if self.bound is None:
            return True
        return bool(self.estimate <= self.bound + slack_sigmas * max(self.sigma, self.null_sigma))

    def near_zero(self, slack_sigmas: float = 3.0) -> bool:
        return bool(abs(self.estimate) <= slack_sigmas * self.null_sigma)

    def as_record(self) -> Dict[str, object]:
        return {"experiment": self.experiment, "trials": self.trials, "estimate": self.estimate,
                "ci_low": self.ci_low, "ci_high": self.ci_high, "bound": self.bound,
                "pass": self.within_bound()}


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE) -> Tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def hash_distribution(k: int, ell: int) -> np.ndarray:
    """(2^k, 2^ell) table of Pr_seed[hash(x) = c] over a uniform seed."""
    s_len = seed_length(k, ell)
    if s_len > 20:
        raise ValueError("seed space too large to enumerate")
    msgs = message_table(k)
    seeds = message_table(s_len) if s_len else np.zeros((1, 0), dtype=np.uint8)
    weights = (1 << np.arange(ell - 1, -1, -1)) if ell else np.zeros(0, dtype=np.int64)
    table = np.zeros((msgs.shape[0], 2 ** ell))
    for sd in seeds:
        c = extract_batch(msgs, np.broadcast_to(sd, (msgs.shape[0], sd.size)), ell).astype(np.int64) @ weights
        table[np.arange(msgs.shape[0]), c] += 1.0
    return table / len(seeds)


def _posteriors(code: LinearCode, ell: int, known: np.ndarray, y_obs: np.ndarray,
                seeds: Optional[np.ndarray]) -> np.ndarray:
    """(N, 2^ell) posterior of c given each view; x uniform a priori."""
    enc = code.codeword_table()
    msgs = message_table(code.k)
    n_trials = known.shape[0]
    out = np.empty((n_trials, 2 ** ell))
    weights = (1 << np.arange(ell - 1, -1, -1)) if ell else np.zeros(0, dtype=np.int64)
    if seeds is None:
        seed_marginal = hash_distribution(code.k, ell)
    for lo in range(0, n_trials, 2048):
        hi = min(n_trials, lo + 2048)
        kn, yo = known[lo:hi, None, :], y_obs[lo:hi, None, :]
        consistent = ~np.any(kn & (enc[None, :, :] != yo), axis=2)  # (b, 2^k)
        post_x = consistent / consistent.sum(axis=1, keepdims=True)
        if seeds is not None:
            s = np.broadcast_to(seeds[lo:hi, None, :], (hi - lo, msgs.shape[0], seeds.shape[1]))
            m = np.broadcast_to(msgs[None], (hi - lo,) + msgs.shape)
            cvals = extract_batch(m, s, ell).astype(np.int64) @ weights  # (b, 2^k)
            dist = np.zeros((hi - lo, 2 ** ell))
            rows = np.repeat(np.arange(hi - lo), msgs.shape[0])
            np.add.at(dist, (rows, cvals.reshape(-1)), post_x.reshape(-1))
        else:
            dist = post_x @ seed_marginal
        out[lo:hi] = dist
    return out


def guessing_game(code: LinearCode, ell: int, known: np.ndarray, y_obs: np.ndarray,
                  seeds: Optional[np.ndarray], c_true: np.ndarray, rng: np.random.Generator,
                  experiment: str = "hiding", bound: Optional[float] = None) -> AdvantageEstimate:
    """Bayes-optimal real-or-random game over N sampled views."""
    n_trials = known.shape[0]
    post = _posteriors(code, ell, known, y_obs, seeds)
    weights = (1 << np.arange(ell - 1, -1, -1)) if ell else np.zeros(0, dtype=np.int64)
    c_idx = c_true.astype(np.int64) @ weights
    fake = rng.integers(0, 2 ** ell, size=n_trials)
    real = rng.integers(0, 2, size=n_trials).astype(bool)
    shown = np.where(real, c_idx, fake)
    p_shown = post[np.arange(n_trials), shown]
    uniform = 2.0 ** -ell
    tie = np.isclose(p_shown, uniform, rtol=0, atol=1e-12)
    guess_real = np.where(tie, rng.integers(0, 2, size=n_trials).astype(bool), p_shown > uniform)
    correct = int(np.count_nonzero(guess_real == real))
    p_hat = correct / n_trials
    lo, hi = wilson_interval(correct, n_trials)
    view_tv = 0.5 * np.abs(post - uniform).sum(axis=1)
    return AdvantageEstimate(experiment, n_trials, correct, 2 * p_hat - 1, 2 * lo - 1, 2 * hi - 1,
                             2 * np.sqrt(p_hat * (1 - p_hat) / n_trials), float(view_tv.mean()),
                             bound)


def exact_hiding_advantage(code: LinearCode, ell: int, known_positions: Sequence[int],
                           knows_seed: bool = True) -> float:
    """Exact total-variation advantage by enumerating every message and seed."""
    enc = code.codeword_table()
    msgs = message_table(code.k)
    pos = np.asarray(sorted(known_positions), dtype=np.int64)
    s_len = seed_length(code.k, ell)
    all_seeds = message_table(s_len) if s_len else np.zeros((1, 0), dtype=np.uint8)
    weights = (1 << np.arange(ell - 1, -1, -1)) if ell else np.zeros(0, dtype=np.int64)
    total = 0.0
    seeds_iter = all_seeds if knows_seed else [None]
    for seed in seeds_iter:
        joint: Dict[bytes, np.ndarray] = {}
        for xi in range(msgs.shape[0]):
            key = enc[xi, pos].tobytes()
            acc = joint.setdefault(key, np.zeros(2 ** ell))
            if seed is None:
                for s in all_seeds:
                    c = int(extract_batch(msgs[xi][None], s[None], ell)[0] @ weights)
                    acc[c] += 1.0 / len(all_seeds)
            else:
                c = int(extract_batch(msgs[xi][None], seed[None], ell)[0] @ weights)
                acc[c] += 1.0
        # sum over views of P(view) * TV(P(c|view), uniform)
        for acc in joint.values():
            pv = acc.sum() / msgs.shape[0]
            total += pv * 0.5 * np.abs(acc / acc.sum() - 2.0 ** -ell).sum()
    return total / len(seeds_iter)


# --------------------------------------------------------------------------
# hiding experiments

@dataclass(frozen=True)
class CoalitionSpec:
    """Which information a hiding coalition pools.

    nodes
        Trusted nodes whose qubit positions the coalition learns u on.
    has_z, has_seed
        Whether z and r are in the pooled view (Bob holds both).
    """

    nodes: Tuple[int, ...] = ()
    has_z: bool = True
    has_seed: bool = True
    extra_positions: Tuple[int, ...] = ()

    def positions(self, params: ProtocolParams) -> List[int]:
        pos = set(self.extra_positions)
        for i in self.nodes:
            pos.update(params.node_positions(i))
        return sorted(pos)


def _batch_views(params: ProtocolParams, code: LinearCode, spec: CoalitionSpec,
                 trials: int, rng: np.random.Generator):
    k, n, ell = params.k, params.n, params.ell
    x = rng.integers(0, 2, size=(trials, k), dtype=np.uint8)
    z = rng.integers(0, 2, size=(trials, n), dtype=np.uint8)
    r = rng.integers(0, 2, size=(trials, seed_length(k, ell)), dtype=np.uint8)
    y = ((x.astype(np.int64) @ code.generator.astype(np.int64)) % 2).astype(np.uint8)
    c = extract_batch(x, r, ell)
    known = np.zeros((trials, n), dtype=bool)
    if spec.has_z:
        known[:, spec.positions(params)] = True
    y_obs = np.where(known, y, 0).astype(np.uint8)
    return known, y_obs, (r if spec.has_seed else None), c


def _engine_views(params: ProtocolParams, code: LinearCode, spec: CoalitionSpec, trials: int,
                  seed: int, phase: Optional[str]):
    hooks = AdversaryHooks(corrupt_nodes=frozenset(spec.nodes), node_tamper=snoop_with_theta)
    known = np.zeros((trials, params.n), dtype=bool)
    y_obs = np.zeros((trials, params.n), dtype=np.uint8)
    seeds = np.zeros((trials, seed_length(params.k, params.ell)), dtype=np.uint8)
    c = np.zeros((trials, params.ell), dtype=np.uint8)
    members = {f"T{i}" for i in spec.nodes} | ({"bob"} if spec.has_z else set())
    for run in range(trials):
        if phase is None:
            from .protocol import run_commit
            state, _ = run_commit(params, code, seed, hooks, run, check_params=False)
        else:
            state, _ = run_protocol(params, code, seed, phase, hooks, run, check_params=False)
        view = CoalitionView.from_run(state, members)
        known[run], y_obs[run] = view.known_y()
        seeds[run] = state.alice["r"].bits
        c[run] = state.c.bits
    return known, y_obs, (seeds if spec.has_seed else None), c


def hiding_advantage(params: ProtocolParams, code: LinearCode, spec: CoalitionSpec,
                     trials: int, seed: int, phase: Optional[str] = None,
                     source: str = "batch", experiment: str = "hiding_commit",
                     bound: Optional[float] = None) -> AdvantageEstimate:
    """Estimate the coalition's real-or-random advantage on c.

    ``source="batch"`` samples the commit variables vectorised; ``"engine"``
    runs the full protocol with snooping corrupt nodes and reads the views out
    of the transcripts (slow; used to cross-check the batch path).
    """
    if trials < 1000:
        raise ValueError("hiding experiments need at least 1000 trials")
    salt = zlib.crc32(experiment.encode())
    rng = derive_rng(seed, 0, 99, salt)
    if source == "batch":
        known, y_obs, seeds, c = _batch_views(params, code, spec, trials, rng)
    elif source == "engine":
        known, y_obs, seeds, c = _engine_views(params, code, spec, trials, seed, phase)
    else:
        raise ValueError(f"unknown source {source!r}")
    return guessing_game(code, params.ell, known, y_obs, seeds, c, derive_rng(seed, 1, 99, salt),
                         experiment, bound)


def commit_hiding_bound(params: ProtocolParams, spec: CoalitionSpec) -> float:
    from .extractor import leftover_hash_epsilon
    return leftover_hash_epsilon(params.k - len(spec.positions(params)), params.ell)


def erase_hiding_advantage(params: ProtocolParams, code: LinearCode, corrupt: Sequence[int],
                           trials: int, seed: int, source: str = "batch") -> AdvantageEstimate:
    """Bob plus every node after an erase.

    Honest nodes returned their qubits and keep nothing; corrupt nodes keep
    what they learned with Bob's help during the run.
    """
    spec = CoalitionSpec(nodes=tuple(corrupt), has_z=True, has_seed=True)
    return hiding_advantage(params, code, spec, trials, seed, "erase", source,
                            "hiding_erase", commit_hiding_bound(params, spec))


def open_hiding_advantage(params: ProtocolParams, code: LinearCode, corrupt: Sequence[int],
                          trials: int, seed: int, source: str = "batch") -> AdvantageEstimate:
    """All nodes after an open, without Bob.

    Corrupt nodes are credited with u on their positions, as if they had
    learned theta; without z that is still a one-time-padded string.
    """
    spec = CoalitionSpec(nodes=tuple(corrupt), has_z=False, has_seed=False)
    est = hiding_advantage(params, code, spec, trials, seed, "open", source, "hiding_open",
                           commit_hiding_bound(params, CoalitionSpec(nodes=tuple(corrupt))))
    return est


def local_hiding_check(params: ProtocolParams, code: LinearCode, node_index: int, trials: int,
                       seed: int, leak: Sequence[str] = ()) -> AdvantageEstimate:
    """Advantage of one honest node holding its n/m positions.

    The node is credited with u on its slice; ``leak`` may add ``"z"`` and
    ``"r"`` for out-of-model contrast runs.
    """
    spec = CoalitionSpec(nodes=(node_index,), has_z="z" in leak, has_seed="r" in leak)
    from .extractor import leftover_hash_epsilon
    bound = leftover_hash_epsilon(params.k - params.slice_size, params.ell)
    return hiding_advantage(params, code, spec, trials, seed, None, "batch",
                            f"local_hiding_T{node_index}", bound)


# --------------------------------------------------------------------------
# expungement

@dataclass
class ExpungementResult:
    trials: int
    accepted: int
    accept_rate: float
    accept_ci: Tuple[float, float]
    accept_sigma: float
    exact_accept: float
    advantage_all: AdvantageEstimate
    advantage_accepted: Optional[AdvantageEstimate]
    measured: int


def expungement_attack_run(params: ProtocolParams, code: LinearCode, trials: int, seed: int,
                           fraction: float = 1.0) -> ExpungementResult:
    """All nodes collude (without Bob), measure a fraction of the qubits in
    random bases, and resend; then erase runs and theta, z, r are revealed.

    ``exact_accept`` is Pr[Bin(M, 1/4) <= threshold] for M measured qubits:
    each blind measurement disturbs a qubit with probability 1/4.
    """
    hooks = AdversaryHooks(corrupt_nodes=frozenset(range(1, params.m + 1)),
                           node_tamper=blind_measure_resend(fraction) if fraction > 0 else None)
    s = params.slice_size
    measured = params.m * int(round(fraction * s))
    known = np.zeros((trials, params.n), dtype=bool)
    y_obs = np.zeros((trials, params.n), dtype=np.uint8)
    seeds = np.zeros((trials, seed_length(params.k, params.ell)), dtype=np.uint8)
    c = np.zeros((trials, params.ell), dtype=np.uint8)
    accepted = np.zeros(trials, dtype=bool)
    for run in range(trials):
        state, res = run_protocol(params, code, seed, "erase", hooks, run, check_params=False)
        accepted[run] = res.flag_a is Flag.ERASE
        theta, z = state.alice["theta"], state.alice["z"]
        for recs in state.adversary_memory.get("blind", {}).values():
            for p, (basis, bit) in recs.items():
                if basis == theta[p]:
                    known[run, p] = True
                    y_obs[run, p] = bit ^ z[p]
        seeds[run] = state.alice["r"].bits
        c[run] = state.c.bits
    n_acc = int(accepted.sum())
    rate = n_acc / trials
    rng = derive_rng(seed, 2, 99)
    adv_all = guessing_game(code, params.ell, known, y_obs, seeds, c, rng, "expungement_all")
    adv_acc = None
    if n_acc:
        a = accepted
        adv_acc = guessing_game(code, params.ell, known[a], y_obs[a], seeds[a], c[a], rng,
                                "expungement_accepted")
    return ExpungementResult(trials, n_acc, rate, wilson_interval(n_acc, trials),
                             float(np.sqrt(max(rate * (1 - rate), 1e-300) / trials)),
                             float(binom.cdf(params.accept_threshold, measured, 0.25)),
                             adv_all, adv_acc, measured)


# --------------------------------------------------------------------------
# binding

@dataclass
class BindingResult:
    max_probability: float
    witness: Optional[Tuple[int, int, int]]  # (committed string, flip pattern, opened message)
    strings: int
    patterns: int
    threshold: int


def _int_codewords(code: LinearCode) -> np.ndarray:
    n = code.n
    w = (1 << np.arange(n - 1, -1, -1, dtype=np.int64))
    return code.codeword_table().astype(np.int64) @ w


def flip_patterns(n: int, budget: int, support: Optional[Sequence[int]] = None) -> np.ndarray:
    """All flip masks of weight <= budget (big-endian position 0 = MSB)."""
    support = list(range(n)) if support is None else list(support)
    out = []
    for w in range(budget + 1):
        for combo in itertools.combinations(support, w):
            out.append(sum(1 << (n - 1 - p) for p in combo))
    return np.asarray(out, dtype=np.int64)


def _nearest(words: np.ndarray, cw: np.ndarray) -> np.ndarray:
    d = np.bitwise_count(words[:, None] ^ cw[None, :])
    return np.argmin(d, axis=1)  # ties resolve to the smallest message index


def _acceptance_table(code: LinearCode, threshold: int, patterns: np.ndarray,
                      strings: np.ndarray) -> np.ndarray:
    cw = _int_codewords(code)
    acc = np.zeros((strings.size, cw.size), dtype=bool)
    for e in patterns:
        acc |= np.bitwise_count((strings ^ e)[:, None] ^ cw[None, :]) <= threshold
    return acc


def _hashes_can_differ(code: LinearCode, ell: int, a: int, b: int) -> bool:
    if ell == 0 or a == b:
        return False
    s_len = seed_length(code.k, ell)
    diff = message_table(code.k)[a] ^ message_table(code.k)[b]
    seeds = message_table(s_len) if s_len <= 16 else None
    if seeds is None:
        return True  # a nonzero vector has a nonzero Toeplitz image for some seed
    return bool(np.any(extract_batch(np.broadcast_to(diff, (len(seeds), code.k)), seeds, ell)))


MAX_BINDING_WORK = 2 * 10 ** 9


def binding_attack_exhaustive(params: ProtocolParams, code: LinearCode, budget: int,
                              threshold: Optional[int] = None,
                              corrupt_positions: Optional[Sequence[int]] = None) -> BindingResult:
    """Best equivocation probability of a dishonest Alice, by enumeration.

    Alice commits any classical string y~ (every one of the 2^n strings), may
    later flip any pattern of weight <= ``budget`` and opens any message.  The
    committed value is the one the simulator fixes: the message of the
    codeword nearest to the string Bob would read from honest positions
    (corrupt positions zeroed when ``corrupt_positions`` is given, and flips
    then restricted to them).  Strategies are deterministic, so the result
    is 0 or 1.
    """
    n, k = code.n, code.k
    if n > 20 or k > 4:
        raise ValueError("exhaustive binding search limited to n <= 20, k <= 4")
    tau = params.accept_threshold if threshold is None else threshold
    patterns = flip_patterns(n, budget, corrupt_positions)
    strings = np.arange(2 ** n, dtype=np.int64)
    if strings.size * patterns.size * 2 ** k > MAX_BINDING_WORK:
        raise ValueError("enumeration budget exceeded")
    cw = _int_codewords(code)
    if corrupt_positions is None:
        sim_source = strings
    else:
        keep = ~sum(1 << (n - 1 - p) for p in corrupt_positions) & ((1 << n) - 1)
        sim_source = strings & keep
    sim = _nearest(sim_source, cw)
    acc = _acceptance_table(code, tau, patterns, strings)
    differ = np.array([[_hashes_can_differ(code, params.ell, a, b) for b in range(cw.size)]
                       for a in range(cw.size)])
    cheat = acc & differ[sim]
    hits = np.argwhere(cheat)
    witness = None
    if hits.size:
        s_idx, x_idx = (int(v) for v in hits[0])
        for e in patterns:
            if int(np.bitwise_count((strings[s_idx] ^ e) ^ cw[x_idx])) <= tau:
                witness = (s_idx, int(e), x_idx)
                break
    return BindingResult(1.0 if hits.size else 0.0, witness, int(strings.size),
                         int(patterns.size), tau)


def weak_binding_sum(params: ProtocolParams, code: LinearCode, budget: int,
                     threshold: Optional[int] = None) -> int:
    """max over commit strings and seeds of sum_c p_c.

    For a fixed commit (string, seed) Bob is deterministic, so p_c is 1 when
    some flip pattern makes him accept a message hashing to c, else 0.
    """
    n, k, ell = code.n, code.k, params.ell
    if n > 20 or k > 4:
        raise ValueError("exhaustive weak-binding search limited to n <= 20, k <= 4")
    tau = params.accept_threshold if threshold is None else threshold
    strings = np.arange(2 ** n, dtype=np.int64)
    acc = _acceptance_table(code, tau, flip_patterns(n, budget), strings)
    s_len = seed_length(k, ell)
    seeds = message_table(s_len) if s_len else np.zeros((1, 0), dtype=np.uint8)
    msgs = message_table(k)
    weights = (1 << np.arange(ell - 1, -1, -1)) if ell else np.zeros(0, dtype=np.int64)
    rows = np.unique(acc, axis=0)
    best = 0
    for s in seeds:
        cvals = extract_batch(msgs, np.broadcast_to(s, (msgs.shape[0], s.size)), ell).astype(np.int64) @ weights
        onehot = np.zeros((msgs.shape[0], 2 ** ell), dtype=bool)
        onehot[np.arange(msgs.shape[0]), cvals] = True
        reach = (rows.astype(np.int64) @ onehot.astype(np.int64)) > 0
        best = max(best, int(reach.sum(axis=1).max()))
    return best


def dense_binding_spot_check(code: LinearCode, threshold: int, corrupt: Sequence[int],
                             trials: int, rng: np.random.Generator) -> float:
    """Equivocation probability against random entangled commit states.

    Operations on the corrupt positions cannot change the outcome
    distribution on the honest ones, so Bob accepts a message only if it is
    within ``threshold`` of the honest-position outcome.  Returns the largest
    probability, over ``trials`` random states, that some message other than
    the simulator's is still acceptable.
    """
    from .quantum.dense import outcome_distribution, random_density_matrix
    n = code.n
    if n > 10:
        raise ValueError("dense spot checks limited to n <= 10")
    honest = [p for p in range(n) if p not in set(corrupt)]
    cw = code.codeword_table()
    worst = 0.0
    for _ in range(trials):
        state = random_density_matrix(n, rng, rank=2)
        theta = rng.integers(0, 2, size=n)
        probs = outcome_distribution(state, theta)
        outcomes = message_table(n)  # every measured string, big-endian index order
        bad = 0.0
        for idx in np.nonzero(probs > 1e-15)[0]:
            s = outcomes[idx]
            ybar = s.copy()
            ybar[list(corrupt)] = 0
            sim = int(np.argmin((cw != ybar).sum(axis=1)))
            d_h = (cw[:, honest] != s[honest]).sum(axis=1)
            if np.any((d_h <= threshold) & (np.arange(len(cw)) != sim)):
                bad += probs[idx]
        worst = max(worst, bad)
    return worst
