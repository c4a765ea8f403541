"""Toeplitz-family hashing for privacy amplification.

Two families are available:

``"toeplitz"``
    The ell x k Toeplitz matrix ``T[i, j] = seed[i - j + k - 1]`` from a seed
    of k + ell - 1 bits.
``"modified"`` (default)
    ``[I_ell | T']`` with ``T'`` an ell x (k - ell) Toeplitz matrix, seed of
    k - 1 bits.  Every member has full row rank, so a uniform x gives a
    uniform c for *each* seed.  With plain Toeplitz the all-zero seed maps
    everything to 0, which at desk-scale k is a visible bias.

Both families are two-universal.
"""

from __future__ import annotations

import numpy as np

from .bits import BitLike, BitString, as_bits

TOEPLITZ = "toeplitz"
MODIFIED = "modified"
DEFAULT_FAMILY = MODIFIED


def seed_length(k: int, ell: int, family: str = DEFAULT_FAMILY) -> int:
    if ell == 0:
        return 0
    if family == TOEPLITZ:
        return k + ell - 1
    if family == MODIFIED:
        return k - 1 if k > ell else 0
    raise ValueError(f"unknown hash family {family!r}")


def _toeplitz(seed: np.ndarray, cols: int, rows: int) -> np.ndarray:
    i = np.arange(rows)[:, None]
    j = np.arange(cols)[None, :]
    return seed[..., i - j + cols - 1]


def hash_matrix(seed: BitLike, k: int, ell: int, family: str = DEFAULT_FAMILY) -> np.ndarray:
    """The ell x k GF(2) matrix selected by ``seed``."""
    if not 0 <= ell <= k:
        raise ValueError(f"need 0 <= ell <= k, got ell={ell}, k={k}")
    s = as_bits(seed)
    if s.size != seed_length(k, ell, family):
        raise ValueError(f"seed length {s.size} != {seed_length(k, ell, family)} for {family}")
    if ell == 0:
        return np.zeros((0, k), dtype=np.uint8)
    if family == TOEPLITZ:
        return _toeplitz(s, k, ell)
    right = _toeplitz(s, k - ell, ell) if k > ell else np.zeros((ell, 0), dtype=np.uint8)
    return np.concatenate([np.eye(ell, dtype=np.uint8), right], axis=1)


def toeplitz_matrix(seed: BitLike, k: int, ell: int) -> np.ndarray:
    return hash_matrix(seed, k, ell, TOEPLITZ)


def extract(x: BitLike, seed: BitLike, ell: int, family: str = DEFAULT_FAMILY) -> BitString:
    """c = M(seed) x over GF(2)."""
    xv = as_bits(x)
    mat = hash_matrix(seed, xv.size, ell, family)
    return BitString(((mat.astype(np.int64) @ xv.astype(np.int64)) % 2).astype(np.uint8))


def extract_batch(x: np.ndarray, seeds: np.ndarray, ell: int,
                  family: str = DEFAULT_FAMILY) -> np.ndarray:
    """Row-wise hashes for (..., k) messages and matching (..., seed_length) seeds."""
    x = np.asarray(x, dtype=np.uint8)
    seeds = np.asarray(seeds, dtype=np.uint8)
    k = x.shape[-1]
    if ell == 0:
        return np.zeros(x.shape[:-1] + (0,), dtype=np.uint8)
    if family == TOEPLITZ:
        mats = _toeplitz(seeds, k, ell)
        out = np.einsum("...ij,...j->...i", mats.astype(np.int64), x.astype(np.int64))
    else:
        out = x[..., :ell].astype(np.int64)
        if k > ell:
            mats = _toeplitz(seeds, k - ell, ell)
            out = out + np.einsum("...ij,...j->...i", mats.astype(np.int64),
                                  x[..., ell:].astype(np.int64))
    return (out % 2).astype(np.uint8)


def leftover_hash_epsilon(min_entropy: float, ell: int) -> float:
    """Distance from uniform guaranteed by the leftover hash lemma.

    Returns ``2^(-(min_entropy - ell)/2 - 1)``.  Values of 1/2 and above mean
    the entropy gap is too small to promise anything.
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    return 2.0 ** (-(min_entropy - ell) / 2 - 1)
