"""Bit-packing helpers shared by the tableau and stabilizer-simulator code.

Pauli bit vectors live in plain Python integers (LSB = qubit 1); the
functions here move batches of them in and out of numpy arrays so that
all-pairs GF(2) work (commutation matrices, block transposes, batched row
products) runs word-parallel instead of in Python loops.
"""

from __future__ import annotations

import numpy as np


def unpack_ints(values, width: int) -> np.ndarray:
    """Little-endian bits of each integer as a (len(values), width) uint8 array."""
    nbytes = (width + 7) // 8
    buf = b"".join(v.to_bytes(nbytes, "little") for v in values)
    arr = np.frombuffer(buf, dtype=np.uint8).reshape(len(values), nbytes)
    return np.unpackbits(arr, axis=1, bitorder="little")[:, :width]


def pack_bits(bits: np.ndarray) -> list:
    """Inverse of :func:`unpack_ints`; one integer per row of the bit matrix."""
    packed = np.packbits(bits, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def bits_to_words(bits: np.ndarray) -> np.ndarray:
    """(m, width) uint8 bit matrix -> (m, ceil(width/64)) uint64 word matrix."""
    m = bits.shape[0]
    packed = np.packbits(bits, axis=1, bitorder="little")
    nwords = (packed.shape[1] + 7) // 8
    padded = np.zeros((m, 8 * nwords), dtype=np.uint8)
    padded[:, :packed.shape[1]] = packed
    return padded.view("<u8")


def words_to_bits(words: np.ndarray, width: int) -> np.ndarray:
    """Inverse of :func:`bits_to_words` up to the declared bit width."""
    raw = np.ascontiguousarray(words).view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :width]


def and_parity(a_words: np.ndarray, b_words: np.ndarray) -> np.ndarray:
    """Matrix of popcount parities: out[j, k] = |a_j AND b_k| mod 2."""
    acc = np.zeros((a_words.shape[0], b_words.shape[0]), dtype=np.uint64)
    for w in range(a_words.shape[1]):
        acc ^= a_words[:, None, w] & b_words[None, :, w]
    for shift in (32, 16, 8, 4, 2, 1):
        acc ^= acc >> np.uint64(shift)
    return (acc & np.uint64(1)).astype(np.uint8)
