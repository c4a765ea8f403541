"""Exact density-matrix backend for a handful of qubits.

Qubit 0 is the most significant tensor factor.  Used for Uhlmann/fidelity
checks and to cross-check the symbolic backend's statistics.
"""

from __future__ import annotations

from functools import reduce
from typing import Optional, Sequence, Tuple

import numpy as np

MAX_QUBITS = 12
PSD_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULIS = (I2, X, Y, Z)


class DenseState:
    """Density matrix on ``q <= 12`` qubits.

    Parameters
    ----------
    rho : array_like
        Square matrix of side 2**q.
    validate : bool
        Check Hermiticity, unit trace and positivity (eigenvalues >= -1e-10).
    """

    def __init__(self, rho, validate: bool = True):
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        q = int(round(np.log2(rho.shape[0])))
        if 2 ** q != rho.shape[0]:
            raise ValueError("dimension is not a power of two")
        if q > MAX_QUBITS:
            raise ValueError(f"{q} qubits exceeds the dense limit of {MAX_QUBITS}")
        if validate:
            if not np.allclose(rho, rho.conj().T, atol=1e-9):
                raise ValueError("density matrix not Hermitian")
            if abs(np.trace(rho) - 1) > 1e-9:
                raise ValueError("density matrix trace != 1")
            rho = (rho + rho.conj().T) / 2
            if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
                raise ValueError("density matrix not positive semidefinite")
        self.rho = rho
        self.num_qubits = q

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def from_vector(cls, psi) -> "DenseState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def dump_text(self) -> str:
        """Real and imaginary parts as whitespace-separated matrix text."""
        fmt = lambda m: "\n".join(" ".join(f"{v:+.12e}" for v in row) for row in m)
        return f"# real\n{fmt(self.rho.real)}\n# imag\n{fmt(self.rho.imag)}\n"


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats, np.ones((1, 1), dtype=complex))


def bb84_vector(u: Sequence[int], theta: Sequence[int]) -> np.ndarray:
    """State vector of H^theta |u>."""
    kets = []
    for bit, b in zip(u, theta):
        ket = np.zeros(2, dtype=complex)
        ket[int(bit)] = 1
        kets.append(H @ ket if b else ket)
    return reduce(np.kron, kets, np.ones(1, dtype=complex))


def bb84_state(u: Sequence[int], theta: Sequence[int]) -> DenseState:
    return DenseState.from_vector(bb84_vector(u, theta))


def register_to_dense(reg) -> DenseState:
    """Dense form of a symbolic register's current state."""
    if reg.n > MAX_QUBITS:
        raise ValueError("register too large for the dense backend")
    return bb84_state(reg.cur_bit, reg.cur_basis)


def single_qubit_op(op: np.ndarray, qubit: int, q: int) -> np.ndarray:
    mats = [I2] * q
    mats[qubit] = op
    return kron_all(mats)


def apply_unitary(state: DenseState, u: np.ndarray) -> DenseState:
    return DenseState(u @ state.rho @ u.conj().T, validate=False)


def depolarize(state: DenseState, qubit: int, eps: float) -> DenseState:
    """(1-eps) rho + eps I/2 on one qubit, via the Pauli-twirl identity."""
    q = state.num_qubits
    twirl = sum(single_qubit_op(p, qubit, q) @ state.rho @ single_qubit_op(p, qubit, q).conj().T
                for p in PAULIS) / 4
    return DenseState((1 - eps) * state.rho + eps * twirl, validate=False)


def outcome_distribution(state: DenseState, basis: Sequence[int]) -> np.ndarray:
    """Probabilities of the 2**q outcomes when measuring qubit i in H^basis[i]."""
    rot = kron_all([H if b else I2 for b in basis])
    probs = np.real(np.diag(rot @ state.rho @ rot.conj().T))
    return np.clip(probs, 0.0, None)


def psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def trace_distance(rho: DenseState, sigma: DenseState) -> float:
    """(1/2) * sum of |eigenvalues| of rho - sigma."""
    a, b = _mat(rho), _mat(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(0.5 * np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).sum())


def fidelity(rho: DenseState, sigma: DenseState) -> float:
    """Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1]."""
    a, b = _mat(rho), _mat(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sa = psd_sqrt(a)
    inner = sa @ b @ sa
    w = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    return float(min(1.0, np.sqrt(np.clip(w, 0.0, None)).sum()))


def uhlmann_purifications(rho: DenseState, rho_prime: DenseState) -> Tuple[np.ndarray, np.ndarray]:
    """Purifications on the doubled space whose overlap equals the fidelity.

    ``psi = vec(sqrt(rho))`` and ``psi' = vec(sqrt(rho') V)`` where V is the
    polar unitary of ``sqrt(rho) sqrt(rho')``, so that
    ``<psi|psi'> = || sqrt(rho) sqrt(rho') ||_1 = F(rho, rho')``.
    """
    for s in (rho, rho_prime):
        if not isinstance(s, DenseState):
            raise TypeError("uhlmann_purifications expects DenseState inputs")
    if rho.dim != rho_prime.dim:
        raise ValueError("dimension mismatch")
    sa, sb = psd_sqrt(rho.rho), psd_sqrt(rho_prime.rho)
    w, _, vh = np.linalg.svd(sa @ sb)
    v = vh.conj().T @ w.conj().T
    # vec(A) = sum_ij A_ij |i>|j>, so Tr_2 |vec A><vec A| = A A^dagger
    psi = sa.reshape(-1)
    psi_prime = (sb @ v).reshape(-1)
    return psi, psi_prime


def reduced_first(psi: np.ndarray, dim: int) -> np.ndarray:
    """Reduced state on the first factor of a vector on C^dim x C^dim."""
    a = psi.reshape(dim, dim)
    return a @ a.conj().T


def pure_trace_distance(psi: np.ndarray, phi: np.ndarray) -> float:
    """(1/2)|| |psi><psi| - |phi><phi| ||_1 = sqrt(1 - |<psi|phi>|^2) for unit vectors."""
    ov = abs(np.vdot(psi, phi))
    return float(np.sqrt(max(0.0, 1.0 - ov * ov)))


def random_density_matrix(num_qubits: int, rng: np.random.Generator,
                          rank: Optional[int] = None) -> DenseState:
    """Random mixed state from a Ginibre matrix of the given rank."""
    dim = 2 ** num_qubits
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DenseState(rho / np.trace(rho))


def _mat(s) -> np.ndarray:
    return s.rho if isinstance(s, DenseState) else np.asarray(s, dtype=complex)
