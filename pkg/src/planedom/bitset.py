"""Fixed-width bit rows stored as little-endian uint64 words.

Bit ``i`` of a row lives in word ``i // 64`` at position ``i % 64``.
"""

from __future__ import annotations

import numpy as np

WORD = 64


def nwords(nbits: int) -> int:
    return max(1, -(-nbits // WORD))


def pack(matrix: np.ndarray) -> np.ndarray:
    """Pack a 2-D boolean matrix into rows of uint64 words."""
    matrix = np.asarray(matrix, dtype=bool)
    rows, nbits = matrix.shape
    w = nwords(nbits)
    padded = np.zeros((rows, w * WORD), dtype=bool)
    padded[:, :nbits] = matrix
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack(rows: np.ndarray, nbits: int) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype="<u8")
    as_bytes = rows.view(np.uint8).reshape(rows.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :nbits].astype(bool)


def from_indices(index_lists, nbits: int) -> np.ndarray:
    """Rows whose set bits are the given index lists."""
    out = np.zeros((len(index_lists), nwords(nbits)), dtype=np.uint64)
    for r, idx in enumerate(index_lists):
        idx = np.asarray(idx, dtype=np.int64)
        np.bitwise_or.at(out[r], idx // WORD, np.left_shift(np.uint64(1), (idx % WORD).astype(np.uint64)))
    return out


def mask(indices, nbits: int) -> np.ndarray:
    """Single row with the given bits set."""
    return from_indices([list(indices)], nbits)[0]


def indices(row: np.ndarray, nbits: int | None = None) -> list[int]:
    bits = unpack(row.reshape(1, -1), nbits if nbits is not None else row.size * WORD)[0]
    return np.flatnonzero(bits).tolist()


def popcount(rows: np.ndarray) -> np.ndarray:
    """Population count summed over the last axis."""
    return np.bitwise_count(rows).sum(axis=-1, dtype=np.int64)
