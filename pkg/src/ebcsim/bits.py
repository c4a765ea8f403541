"""Fixed-length binary words and the seeded randomness scheme.

A :class:`BitString` is an immutable wrapper around a ``uint8`` numpy array
holding only zeros and ones.  Index 0 is the leftmost character of the text
form and the most significant bit of the first hex digit.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

BitLike = Union["BitString", np.ndarray, Iterable[int], str]


class BitString:
    """Immutable binary word.

    Parameters
    ----------
    bits : BitString, array-like of {0, 1}, or str of '0'/'1'
        Contents, leftmost bit first.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: BitLike = ()):
        if isinstance(bits, BitString):
            arr = bits._bits
        elif isinstance(bits, str):
            if any(ch not in "01" for ch in bits):
                raise ValueError(f"not a bit string: {bits!r}")
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            raw = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
            if raw.ndim != 1:
                raise ValueError("BitString needs a 1-d sequence")
            if raw.size and not np.all((raw == 0) | (raw == 1)):
                raise ValueError("BitString elements must be 0 or 1")
            arr = raw.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitString":
        """Parse the hex form; ``length`` trims the zero padding of the last digit."""
        text = text.strip().lower()
        if len(text) * 4 < length:
            raise ValueError(f"hex {text!r} too short for {length} bits")
        bits = "".join(format(int(ch, 16), "04b") for ch in text)
        if "1" in bits[length:]:
            raise ValueError("nonzero padding bits in hex form")
        return cls(bits[:length])

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        """Big-endian: bit 0 is the most significant of ``length`` bits."""
        if value < 0 or value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls(format(value, f"0{length}b") if length else "")

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, idx):
        if isinstance(idx, slice) or isinstance(idx, (list, np.ndarray)):
            return BitString(self._bits[idx])
        return int(self._bits[idx])

    def __iter__(self):
        return (int(b) for b in self._bits)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._bits.copy()
        return self._bits.astype(dtype)

    def __xor__(self, other: BitLike) -> "BitString":
        other = BitString(other)
        if len(other) != len(self):
            raise ValueError(
                f"XOR of BitStrings needs equal lengths ({len(self)} vs {len(other)})")
        return BitString(self._bits ^ other._bits)

    __rxor__ = __xor__

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            try:
                other = BitString(other)
            except (ValueError, TypeError):
                return NotImplemented
        return len(self) == len(other) and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((len(self), self._bits.tobytes()))

    def __add__(self, other: BitLike) -> "BitString":
        """Concatenation."""
        return BitString(np.concatenate([self._bits, BitString(other)._bits]))

    def weight(self) -> int:
        return int(self._bits.sum())

    def to_int(self) -> int:
        return int(self.to_str(), 2) if len(self) else 0

    def to_str(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def to_hex(self) -> str:
        if not len(self):
            return ""
        pad = (-len(self)) % 4
        padded = self.to_str() + "0" * pad
        return "".join(format(int(padded[i:i + 4], 2), "x") for i in range(0, len(padded), 4))

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"BitString('{self.to_str()}')"


def as_bits(value: BitLike) -> np.ndarray:
    """Return ``value`` as a ``uint8`` array without validation beyond dtype."""
    if isinstance(value, BitString):
        return value.bits
    if isinstance(value, str):
        return BitString(value).bits
    return np.asarray(value, dtype=np.uint8)


def hamming_distance(a: BitLike, b: BitLike) -> int:
    """Number of positions where ``a`` and ``b`` differ.

    Raises
    ------
    ValueError
        If the lengths differ.
    """
    a, b = as_bits(a), as_bits(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return int(np.count_nonzero(a != b))


def sample_uniform(length: int, rng: np.random.Generator) -> BitString:
    """Draw ``length`` i.i.d. uniform bits from ``rng``."""
    if length < 0:
        raise ValueError("length must be non-negative")
    return BitString(rng.integers(0, 2, size=length, dtype=np.uint8))


# Stream labels for derive_rng.  Trusted node i (1-based) uses NODE_BASE + i.
ALICE_STREAM = 0
BOB_STREAM = 1
CHANNEL_STREAM = 2
ADVERSARY_STREAM = 3
NODE_BASE = 16


def derive_rng(seed: int, *counters: int) -> np.random.Generator:
    """Child generator for ``(seed, *counters)``.

    Every party and every trial gets its own stream: the master seed is the
    entropy and the counters (typically ``run_index, stream_label``) form the
    spawn key, so streams never overlap and reordering trials changes nothing.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(counters)))
