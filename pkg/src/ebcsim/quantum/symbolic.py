"""Symbolic BB84 register.

Every operation the protocol and the product attacks use (Paulis, flips,
replacement, measure-and-resend) maps a BB84 state H^b|a> to another BB84
state, so a register is exactly a list of ``(bit, basis)`` pairs.  Depolarizing
noise is unravelled into uniformly random Paulis, which reproduces the
channel's measurement statistics exactly.

Y acts as a flip in both bases (its phase is invisible to BB84 measurements).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ..bits import BitLike, BitString, as_bits

INTACT, FLIPPED, REPLACED, DEPOLARIZED, RESENT = range(5)
STATUS_NAMES = ("intact", "flipped", "replaced", "depolarized", "resent")

PAULI_I, PAULI_X, PAULI_Y, PAULI_Z = range(4)


@dataclass(frozen=True)
class Flip:
    """Invert the data bit in the qubit's own basis."""


@dataclass(frozen=True)
class Replace:
    bit: int
    basis: int


@dataclass(frozen=True)
class MeasureAndResend:
    """Measure in ``basis`` (scalar or per-position array) and re-prepare."""
    basis: object


@dataclass(frozen=True, eq=False)
class Bb84Register:
    """Product of BB84 qubits at global protocol ``positions``.

    ``data``/``basis`` are what the preparer encoded; ``cur_bit``/``cur_basis``
    describe the physical state now.  ``pauli`` records the depolarizing Pauli
    drawn for each qubit (0 where none was applied).
    """

    positions: np.ndarray
    data: np.ndarray
    basis: np.ndarray
    cur_bit: np.ndarray
    cur_basis: np.ndarray
    status: np.ndarray
    pauli: np.ndarray

    def __post_init__(self):
        for name in ("positions", "data", "basis", "cur_bit", "cur_basis", "status", "pauli"):
            arr = np.array(getattr(self, name), copy=True)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if len({a.shape for a in (self.positions, self.data, self.basis, self.cur_bit,
                                   self.cur_basis, self.status, self.pauli)}) != 1:
            raise ValueError("register arrays must share one length")

    @property
    def n(self) -> int:
        return int(self.positions.size)

    def __len__(self) -> int:
        return self.n

    def corrupted_mask(self) -> np.ndarray:
        """Qubits whose physical state differs from the prepared one."""
        return (self.cur_bit != self.data) | (self.cur_basis != self.basis)

    def fingerprint(self) -> bytes:
        return b"|".join(a.tobytes() for a in (self.positions, self.cur_bit, self.cur_basis))

    def same_state(self, other: "Bb84Register") -> bool:
        return self.fingerprint() == other.fingerprint()

    def take(self, index: Sequence[int]) -> "Bb84Register":
        """Sub-register by local index."""
        idx = np.asarray(index, dtype=np.int64)
        return Bb84Register(*(getattr(self, f)[idx] for f in _FIELDS))

    def select_positions(self, positions: Iterable[int]) -> "Bb84Register":
        """Sub-register by global position."""
        lookup = {int(p): i for i, p in enumerate(self.positions)}
        try:
            idx = [lookup[int(p)] for p in positions]
        except KeyError as exc:
            raise ValueError(f"position {exc.args[0]} not in register") from None
        return self.take(idx)

    def _with(self, **changes) -> "Bb84Register":
        return replace(self, **changes)


_FIELDS = ("positions", "data", "basis", "cur_bit", "cur_basis", "status", "pauli")


def merge(registers: Sequence[Bb84Register]) -> Bb84Register:
    """Concatenate registers, ordered by global position.

    Raises
    ------
    ValueError
        If two registers carry the same position (that would be cloning).
    """
    if not registers:
        raise ValueError("nothing to merge")
    cat = {f: np.concatenate([getattr(r, f) for r in registers]) for f in _FIELDS}
    if np.unique(cat["positions"]).size != cat["positions"].size:
        raise ValueError("duplicate qubit positions in merge")
    order = np.argsort(cat["positions"], kind="stable")
    return Bb84Register(*(cat[f][order] for f in _FIELDS))


def prepare_bb84(u: BitLike, theta: BitLike,
                 positions: Optional[Sequence[int]] = None) -> Bb84Register:
    """H^theta |u>, all qubits intact."""
    u, theta = as_bits(u), as_bits(theta)
    if u.shape != theta.shape:
        raise ValueError(f"data/basis length mismatch: {u.size} vs {theta.size}")
    pos = np.arange(u.size) if positions is None else np.asarray(positions, dtype=np.int64)
    if pos.shape != u.shape:
        raise ValueError("positions length mismatch")
    zeros = np.zeros(u.size, dtype=np.uint8)
    return Bb84Register(pos, u, theta, u, theta, zeros, zeros)


def _outcomes(reg: Bb84Register, meas_basis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    coin = rng.integers(0, 2, size=reg.n, dtype=np.uint8)
    return np.where(meas_basis == reg.cur_basis, reg.cur_bit, coin).astype(np.uint8)


def _basis_array(basis, n: int) -> np.ndarray:
    if isinstance(basis, (int, np.integer)):
        return np.full(n, int(basis), dtype=np.uint8)
    b = as_bits(basis)
    if b.shape != (n,):
        raise ValueError(f"basis length {b.size} != register length {n}")
    return b


def measure_in_basis(reg: Bb84Register, basis: BitLike, rng: np.random.Generator) -> BitString:
    """Measure each qubit in H^basis; same basis gives the held bit, else a fair coin."""
    return BitString(_outcomes(reg, _basis_array(basis, reg.n), rng))


def measure_and_collapse(reg: Bb84Register, basis: BitLike,
                         rng: np.random.Generator) -> Tuple[BitString, Bb84Register]:
    """Measurement that also returns the post-measurement register."""
    b = _basis_array(basis, reg.n)
    out = _outcomes(reg, b, rng)
    return BitString(out), reg._with(cur_bit=out, cur_basis=b)


def _apply_pauli(bit: np.ndarray, basis: np.ndarray, pauli: np.ndarray) -> np.ndarray:
    # X flips Z-basis states, Z flips X-basis states, Y flips both
    flips = ((pauli == PAULI_X) & (basis == 0)) | ((pauli == PAULI_Z) & (basis == 1)) | (pauli == PAULI_Y)
    return (bit ^ flips).astype(np.uint8)


def apply_pauli(reg: Bb84Register, paulis: Sequence[int]) -> Bb84Register:
    p = np.asarray(paulis, dtype=np.uint8)
    if p.shape != (reg.n,):
        raise ValueError("one Pauli per qubit required")
    status = np.where(p != PAULI_I, DEPOLARIZED, reg.status).astype(np.uint8)
    return reg._with(cur_bit=_apply_pauli(reg.cur_bit, reg.cur_basis, p), status=status,
                     pauli=np.where(p != PAULI_I, p, reg.pauli).astype(np.uint8))


def apply_depolarizing(reg: Bb84Register, eps: float, rng: np.random.Generator) -> Bb84Register:
    """Depolarizing channel (1-eps) rho + eps I/2 on every qubit.

    With probability eps a qubit gets a uniformly random Pauli from {I, X, Y, Z},
    so a non-identity error occurs with probability 3 eps / 4.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    hit = rng.random(reg.n) < eps
    draw = rng.integers(0, 4, size=reg.n, dtype=np.uint8)
    paulis = np.where(hit, draw, PAULI_I).astype(np.uint8)
    out = apply_pauli(reg, paulis)
    status = np.where(hit, DEPOLARIZED, reg.status).astype(np.uint8)
    return out._with(status=status)


def corrupt_positions(reg: Bb84Register, positions: Iterable[int], op,
                      rng: Optional[np.random.Generator] = None) -> Bb84Register:
    """Apply ``op`` (Flip, Replace or MeasureAndResend) at global ``positions``."""
    lookup = {int(p): i for i, p in enumerate(reg.positions)}
    idx = []
    for p in positions:
        if int(p) not in lookup:
            raise ValueError(f"position {p} not held in this register")
        idx.append(lookup[int(p)])
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        return reg
    bit, basis, status = reg.cur_bit.copy(), reg.cur_basis.copy(), reg.status.copy()
    if isinstance(op, Flip):
        bit[idx] ^= 1
        status[idx] = FLIPPED
    elif isinstance(op, Replace):
        bit[idx] = op.bit
        basis[idx] = op.basis
        status[idx] = REPLACED
    elif isinstance(op, MeasureAndResend):
        if rng is None:
            raise ValueError("measure-and-resend needs an rng")
        mb = np.asarray(op.basis, dtype=np.uint8)
        mb = np.full(idx.size, int(mb)) if mb.ndim == 0 else mb
        if mb.shape != idx.shape:
            raise ValueError("one measurement basis per corrupted position required")
        coin = rng.integers(0, 2, size=idx.size, dtype=np.uint8)
        bit[idx] = np.where(mb == basis[idx], bit[idx], coin)
        basis[idx] = mb
        status[idx] = RESENT
    else:
        raise TypeError(f"unknown corruption op {op!r}")
    return reg._with(cur_bit=bit, cur_basis=basis, status=status)
