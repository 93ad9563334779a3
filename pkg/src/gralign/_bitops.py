"""Bit-packed row helpers shared by the graph types and the matching kernel.

Rows are stored as little-endian uint64 words: bit k of word w in a row
corresponds to column 64*w + k.  Host is assumed little-endian (the
packbits/view round trip below relies on it).
"""

from __future__ import annotations

import numpy as np

WORD = 64


def n_words(n_bits: int) -> int:
    return max(1, (n_bits + WORD - 1) // WORD)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a boolean matrix into uint64 words per row."""
    dense = np.ascontiguousarray(dense, dtype=bool)
    rows, bits = dense.shape
    nbytes = n_words(bits) * 8
    packed = np.packbits(dense, axis=1, bitorder="little")
    if packed.shape[1] < nbytes:
        pad = np.zeros((rows, nbytes - packed.shape[1]), dtype=np.uint8)
        packed = np.hstack([packed, pad])
    return np.ascontiguousarray(packed).view(np.uint64)


def unpack_rows(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of pack_rows, trimmed to n_bits columns."""
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    dense = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return dense[:, :n_bits].astype(bool)


def popcount_rows(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=1, dtype=np.int64)


def get_bit(words: np.ndarray, row: int, col: int) -> bool:
    return bool((int(words[row, col >> 6]) >> (col & 63)) & 1)


def gather_columns(words: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Extract the given bit columns from every row, as a boolean matrix."""
    cols = np.asarray(cols, dtype=np.int64)
    word_idx = cols >> 6
    shift = (cols & 63).astype(np.uint64)
    return ((words[:, word_idx] >> shift) & np.uint64(1)).astype(bool)
