"""
Bit-packed linear algebra over GF(2).

Rows are stored as ``uint64`` words, least significant bit first, so that
column ``j`` lives in word ``j >> 6`` at bit ``j & 63``. Padding bits past
the last column are always zero.

"""

from typing import Optional

import numpy as np

WORD_BITS = 64


def num_words(n: int) -> int:
    """Number of 64-bit words needed for ``n`` bits."""
    return max(1, (n + WORD_BITS - 1) // WORD_BITS)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a 0/1 array into little-endian ``uint64`` words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    n = bits.shape[-1]
    words = num_words(n)
    padded = np.zeros((*bits.shape[:-1], words * WORD_BITS), dtype=np.uint8)
    padded[..., :n] = bits
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :py:func:`pack_bits`, returning ``uint8`` 0/1 values."""
    raw = np.ascontiguousarray(np.asarray(words, dtype="<u8")).view(np.uint8)
    return np.unpackbits(raw, axis=-1, bitorder="little")[..., :n]


def get_bit(words: np.ndarray, j: int) -> np.ndarray:
    """Column ``j`` of packed rows as ``uint64`` 0/1 values."""
    return (words[..., j >> 6] >> np.uint64(j & 63)) & np.uint64(1)


def parity(words: np.ndarray) -> np.ndarray:
    """Popcount parity along the last axis."""
    return (np.bitwise_count(words).sum(axis=-1, dtype=np.int64) & 1).astype(np.uint8)


def row_reduce(
    rows: np.ndarray,
    columns: Optional[list[int]] = None,
) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of packed rows.

    Pivots are chosen as the first remaining row with the column set, and
    columns are visited in the order given (default: ascending), so the
    result is deterministic.

    :returns: the reduced rows (pivot rows first) and the pivot columns.
    """
    rows = np.array(rows, dtype=np.uint64, copy=True)
    m = rows.shape[0]
    if columns is None:
        columns = list(range(rows.shape[1] * WORD_BITS))
    pivots: list[int] = []
    rank = 0
    for col in columns:
        if rank == m:
            break
        hits = np.flatnonzero(get_bit(rows[rank:], col)) + rank
        if hits.size == 0:
            continue
        p = int(hits[0])
        if p != rank:
            rows[[rank, p]] = rows[[p, rank]]
        others = np.flatnonzero(get_bit(rows, col))
        others = others[others != rank]
        if others.size:
            rows[others] ^= rows[rank]
        pivots.append(col)
        rank += 1
    return rows, pivots


def rank(matrix: np.ndarray) -> int:
    """GF(2) rank of a dense 0/1 matrix."""
    matrix = np.asarray(matrix, dtype=np.uint8)
    if matrix.size == 0:
        return 0
    _, pivots = row_reduce(pack_bits(matrix), list(range(matrix.shape[1])))
    return len(pivots)


def solve(matrix: np.ndarray, rhs: np.ndarray) -> Optional[np.ndarray]:
    """Solve ``matrix @ x = rhs`` over GF(2).

    Free variables are set to zero. Returns None when the system is
    inconsistent.
    """
    matrix = np.asarray(matrix, dtype=np.uint8)
    rhs = np.asarray(rhs, dtype=np.uint8).reshape(-1)
    m, n = matrix.shape
    augmented = np.concatenate([matrix, rhs.reshape(m, 1)], axis=1)
    reduced, pivots = row_reduce(pack_bits(augmented), list(range(n)))
    rank_ = len(pivots)
    if rank_ < m and get_bit(reduced[rank_:], n).any():
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, col in enumerate(pivots):
        x[col] = int(get_bit(reduced[row], n))
    return x
