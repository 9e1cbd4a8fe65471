"""Gate-folding kernel: conjugate all 2n tableau rows through a gate stream.

The tableau is held column-major while folding: for each qubit q, the z and
x bits of all 2n rows are packed into 64-bit words, so one elementary gate
touches O(1) words regardless of n.  With numba present the gate loop is
compiled; otherwise a plain-Python big-int version of the same update rules
runs (identical results, adequate for interactive use).

Gate encoding used here: kind 0 = H, 1 = S, 2 = CNOT, with 0-based qubit
indices in ``qa`` (and ``qb`` for the CNOT target).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _fold_kernel_py(kinds, qa, qb, zc, xc, sign, nwords):
    for g in range(kinds.shape[0]):
        k = kinds[g]
        if k == 2:  # CNOT
            c = qa[g]
            t = qb[g]
            for w in range(nwords):
                xcc = xc[c, w]
                zct = zc[t, w]
                sign[w] ^= xcc & zct & ~(xc[t, w] ^ zc[c, w])
                xc[t, w] ^= xcc
                zc[c, w] ^= zct
        elif k == 0:  # H
            q = qa[g]
            for w in range(nwords):
                zq = zc[q, w]
                xq = xc[q, w]
                sign[w] ^= zq & xq
                zc[q, w] = xq
                xc[q, w] = zq
        else:  # S
            q = qa[g]
            for w in range(nwords):
                sign[w] ^= zc[q, w] & xc[q, w]
                zc[q, w] ^= xc[q, w]


if _HAVE_NUMBA:
    _fold_kernel = njit(cache=True)(_fold_kernel_py)
else:  # pragma: no cover
    _fold_kernel = _fold_kernel_py


def fold_columns(n: int, kinds: np.ndarray, qa: np.ndarray, qb: np.ndarray):
    """Run the gate stream on the identity tableau.

    Returns (zc, xc, sign): uint64 arrays of shape (n, nwords) holding, for
    each qubit column, the z/x bits of all 2n rows, plus the packed row sign
    bits (1 = negative), nwords = ceil(2n/64).
    """
    nwords = (2 * n + 63) // 64
    zc = np.zeros((n, nwords), dtype=np.uint64)
    xc = np.zeros((n, nwords), dtype=np.uint64)
    q = np.arange(n)
    zc[q, (2 * q) // 64] = np.uint64(1) << ((2 * q) % 64).astype(np.uint64)
    xc[q, (2 * q + 1) // 64] = np.uint64(1) << ((2 * q + 1) % 64).astype(np.uint64)
    sign = np.zeros(nwords, dtype=np.uint64)
    if kinds.shape[0]:
        _fold_kernel(kinds, qa, qb, zc, xc, sign, nwords)
    return zc, xc, sign
