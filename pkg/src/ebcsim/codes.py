"""Binary linear [n, k, d] codes for desk-scale instances.

Codewords are enumerated exhaustively (k <= 24) using a bit-packed
representation: each codeword is a row of ``uint64`` words, so weights and
distances reduce to ``np.bitwise_count``.

Message ordering: the message ``x`` with leftmost bit ``x[0]`` has index
``int(x)`` read big-endian, i.e. ``x[0]`` selects generator row 0 and is the
most significant bit of the index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .bits import BitLike, BitString, as_bits
from .bounds import binary_entropy

MAX_ENUM_K = 24


class CodeError(ValueError):
    pass


def pack_rows(rows: np.ndarray) -> np.ndarray:
    """Pack a (r, n) 0/1 matrix into (r, ceil(n/64)) uint64 words."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    r, n = rows.shape
    words = max(1, -(-n // 64))
    padded = np.zeros((r, words * 64), dtype=np.uint8)
    padded[:, :n] = rows
    # little-endian bit order inside each word; only popcounts and XOR are used
    as_bytes = np.packbits(padded, axis=1, bitorder="little")
    return as_bytes.view("<u8").reshape(r, words).astype(np.uint64)


def popcount(packed: np.ndarray) -> np.ndarray:
    """Row weights of a packed matrix."""
    return np.bitwise_count(packed).sum(axis=-1, dtype=np.int64)


def gf2_rank(matrix: np.ndarray) -> int:
    m = np.array(matrix, dtype=np.uint8) % 2
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = np.nonzero(m[rank:, col])[0]
        if pivot.size == 0:
            continue
        p = rank + pivot[0]
        m[[rank, p]] = m[[p, rank]]
        hit = np.nonzero(m[:, col])[0]
        hit = hit[hit != rank]
        m[hit] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def all_codewords_packed(generator: np.ndarray) -> np.ndarray:
    """All 2^k codewords, packed, indexed by big-endian message value."""
    g = np.asarray(generator, dtype=np.uint8)
    k = g.shape[0]
    if k > MAX_ENUM_K:
        raise CodeError(f"k={k} exceeds the enumeration budget k <= {MAX_ENUM_K}; "
                        "supply a verified minimum distance instead")
    packed = pack_rows(g)
    words = np.zeros((1, packed.shape[1]), dtype=np.uint64)
    # last row toggles the least significant index bit
    for row in packed[::-1]:
        words = np.concatenate([words, words ^ row], axis=0)
    return words


def min_distance(generator: np.ndarray) -> int:
    """Exact minimum distance by enumerating all nonzero codewords.

    Raises
    ------
    CodeError
        If k > 24.
    """
    g = np.atleast_2d(np.asarray(generator, dtype=np.uint8))
    if g.shape[0] == 0:
        return g.shape[1] + 1  # convention for the trivial code: no nonzero codeword
    weights = popcount(all_codewords_packed(g)[1:])
    return int(weights.min())


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary linear code given by a full-rank k x n generator matrix.

    ``d`` is verified by enumeration when ``k <= 24``; larger codes must pass
    ``verified_d`` explicitly.
    """

    generator: np.ndarray
    d: int = field(default=-1)
    _table: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        g = np.atleast_2d(np.array(self.generator, dtype=np.uint8))
        if g.size and not np.all((g == 0) | (g == 1)):
            raise CodeError("generator entries must be 0/1")
        if gf2_rank(g) != g.shape[0]:
            raise CodeError("generator rows are linearly dependent over GF(2)")
        g.flags.writeable = False
        object.__setattr__(self, "generator", g)
        if g.shape[0] <= MAX_ENUM_K:
            true_d = min_distance(g)
            if self.d >= 0 and self.d != true_d:
                raise CodeError(f"claimed d={self.d} but minimum distance is {true_d}")
            object.__setattr__(self, "d", true_d)
        elif self.d < 0:
            raise CodeError(f"k={g.shape[0]} too large to verify d; pass d explicitly")

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    def codeword_table(self) -> np.ndarray:
        """(2^k, n) uint8 array of all codewords, row index = message value."""
        if self._table is None:
            msgs = message_table(self.k)
            table = (msgs.astype(np.int64) @ self.generator.astype(np.int64)) % 2
            table = table.astype(np.uint8)
            table.flags.writeable = False
            object.__setattr__(self, "_table", table)
        return self._table

    def packed_codewords(self) -> np.ndarray:
        return all_codewords_packed(self.generator)

    def encode(self, x: BitLike) -> BitString:
        return encode(self, x)

    def __repr__(self) -> str:
        return f"LinearCode[n={self.n}, k={self.k}, d={self.d}]"


def message_table(k: int) -> np.ndarray:
    """(2^k, k) table of all messages in big-endian index order."""
    idx = np.arange(2 ** k, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def encode(code: LinearCode, x: BitLike) -> BitString:
    """y = x G over GF(2)."""
    xv = as_bits(x)
    if xv.shape != (code.k,):
        raise ValueError(f"message length {xv.size} != k={code.k}")
    y = (xv.astype(np.int64) @ code.generator.astype(np.int64)) % 2
    return BitString(y.astype(np.uint8))


def nearest_codeword(code: LinearCode, received: BitLike,
                     radius: int) -> Optional[Tuple[BitString, int]]:
    """Unique codeword within ``radius`` of ``received``.

    Returns ``(message, distance)``, or ``None`` when no codeword lies within
    the radius.

    Raises
    ------
    ValueError
        If ``radius > (d - 1) // 2``, where uniqueness is not guaranteed.
    """
    if radius > (code.d - 1) // 2:
        raise ValueError(f"radius {radius} exceeds unique-decoding radius {(code.d - 1) // 2}")
    r = as_bits(received)
    if r.shape != (code.n,):
        raise ValueError(f"received length {r.size} != n={code.n}")
    dists = popcount(code.packed_codewords() ^ pack_rows(r[None, :]))
    best = int(np.argmin(dists))
    if dists[best] > radius:
        return None
    return BitString.from_int(best, code.k), int(dists[best])


def griesmer_length(k: int, d: int) -> int:
    """Smallest n allowed by the Griesmer bound for a binary [n, k, d] code."""
    return sum(math.ceil(d / 2 ** i) for i in range(k))


def gv_feasible(rate: float) -> bool:
    """Whether r < 1 - H2(4r), the asymptotic GV existence condition."""
    if rate < 0:
        raise ValueError("rate must be non-negative")
    if rate >= 0.25:
        return False
    return rate < 1 - binary_entropy(4 * rate)


def search_random_code(n: int, k: int, d_target: int, rng: np.random.Generator,
                       max_attempts: int = 1000) -> Optional[LinearCode]:
    """Draw random generators until one reaches distance ``d_target``.

    Returns ``None`` when the Griesmer bound rules the parameters out or the
    attempt budget runs out.
    """
    if k > MAX_ENUM_K:
        raise CodeError(f"k={k} exceeds enumeration budget")
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    if k < 1 or griesmer_length(k, d_target) > n:
        return None
    for _ in range(max_attempts):
        g = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
        if gf2_rank(g) < k:
            continue
        if min_distance(g) >= d_target:
            return LinearCode(g)
    return None


def repetition_code(n: int) -> LinearCode:
    return LinearCode(np.ones((1, n), dtype=np.uint8))


def hamming_7_4() -> LinearCode:
    g = np.array([[1, 0, 0, 0, 1, 1, 0],
                  [0, 1, 0, 0, 1, 0, 1],
                  [0, 0, 1, 0, 0, 1, 1],
                  [0, 0, 0, 1, 1, 1, 1]], dtype=np.uint8)
    return LinearCode(g)


def split_support_code(n: int, w: int) -> LinearCode:
    """Two-row code with g1 = 1^w 0^(n-w) and g2 = 0^(n-w) 1^w.

    ``split_support_code(16, 10)`` is the [16, 2, 10] demo code.
    """
    if not n / 2 < w <= n:
        raise ValueError("need n/2 < w <= n for two independent rows")
    g = np.zeros((2, n), dtype=np.uint8)
    g[0, :w] = 1
    g[1, n - w:] = 1
    return LinearCode(g)


def save_code(code: LinearCode, path: Union[str, Path]) -> None:
    """Write the text format: header ``n k d`` then k rows of ASCII bits."""
    lines = [f"{code.n} {code.k} {code.d}"]
    lines += ["".join(map(str, row)) for row in code.generator]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_code(text: str) -> LinearCode:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CodeError("empty code file")
    try:
        n, k, d = (int(v) for v in lines[0].split())
    except ValueError as exc:
        raise CodeError(f"bad header {lines[0]!r}; expected 'n k d'") from exc
    rows = lines[1:]
    if len(rows) != k:
        raise CodeError(f"header says k={k} but found {len(rows)} rows")
    g = np.array([as_bits(r) for r in rows], dtype=np.uint8).reshape(k, -1)
    if g.shape[1] != n:
        raise CodeError(f"rows have length {g.shape[1]}, header says n={n}")
    return LinearCode(g, d=d)


def load_code(path: Union[str, Path]) -> LinearCode:
    """Read a code file, re-verifying d when k <= 24."""
    return parse_code(Path(path).read_text())
