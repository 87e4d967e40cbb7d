"""Hot numeric kernels, each in a numba and a plain NumPy variant.

Both variants of a kernel consume identical pre-drawn random blocks and
produce bit-identical output, so the active backend (see `_backend`) is a
pure speed choice.  The `IMPLEMENTATIONS` dict keeps every available
variant importable for parity tests and benchmarking; module-level names
(`markov_letters`, ...) are bound to the active backend.
"""

from __future__ import annotations

import bisect

import numpy as np

from ._backend import BACKEND, HAVE_NUMBA


def _np_markov_letters(u0: np.ndarray, u: np.ndarray, a: float, b: float,
                       p1: float) -> np.ndarray:
    """Drive one two-state chain per row of `u`.

    `u0` seeds X_0 (letter 1 iff u0 < p1, and X_0 is not part of the
    output); column i of `u` decides the i-th transition.  Letter 1 flips
    to 2 with probability a, letter 2 flips to 1 with probability b.
    """
    n_rows, n = u.shape
    out = np.empty((n_rows, n), dtype=np.int8)
    one = np.int8(1)
    x = np.where(u0 < p1, one, np.int8(2))
    for i in range(n):
        thresh = np.where(x == one, a, b)
        x = np.where(u[:, i] < thresh, (3 - x).astype(np.int8), x)
        out[:, i] = x
    return out


def _py_patience_lis(w: np.ndarray) -> int:
    """O(n log n) pile tops; weakly increasing, so ties extend the run."""
    tails: list[int] = []
    for x in w.tolist():
        i = bisect.bisect_right(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def _np_mask_scan_lis(w: np.ndarray) -> int:
    """Exhaustive check of all 2^n subsequences via a subset DP.

    valid[mask] says the subsequence picked by `mask` is weakly
    increasing; last[mask] is its final letter.  Masks are filled in
    blocks by highest set bit.  Caller guards n (memory is 2^n bytes).
    """
    n = int(w.shape[0])
    size = 1 << n
    valid = np.zeros(size, dtype=np.bool_)
    valid[0] = True
    last = np.zeros(size, dtype=np.int64)
    for j in range(n):
        lo = 1 << j
        valid[lo:2 * lo] = valid[:lo] & (last[:lo] <= w[j])
        last[lo:2 * lo] = w[j]
    hits = np.flatnonzero(valid).astype(np.uint64)
    return int(np.bitwise_count(hits).max())


def _np_path_end_and_max(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per row: final value and running max (including the 0 start) of the
    partial-sum path of `z`."""
    cs = np.cumsum(z, axis=1)
    end = cs[:, -1].copy()
    top = np.maximum(cs.max(axis=1), 0.0)
    return end, top


IMPLEMENTATIONS: dict[str, dict[str, object]] = {
    "numpy": {
        "markov_letters": _np_markov_letters,
        "patience_lis": _py_patience_lis,
        "mask_scan_lis": _np_mask_scan_lis,
        "path_end_and_max": _np_path_end_and_max,
    },
}

if HAVE_NUMBA:
    import numba

    @numba.njit(cache=True)
    def _nb_markov_letters(u0, u, a, b, p1):
        n_rows, n = u.shape
        out = np.empty((n_rows, n), dtype=np.int8)
        for t in range(n_rows):
            x = np.int8(1) if u0[t] < p1 else np.int8(2)
            for i in range(n):
                if x == 1:
                    if u[t, i] < a:
                        x = np.int8(2)
                else:
                    if u[t, i] < b:
                        x = np.int8(1)
                out[t, i] = x
        return out

    @numba.njit(cache=True)
    def _nb_patience_lis(w):
        n = w.shape[0]
        tails = np.empty(n, dtype=np.int64)
        size = 0
        for j in range(n):
            x = w[j]
            lo = 0
            hi = size
            while lo < hi:  # first pile whose top exceeds x
                mid = (lo + hi) >> 1
                if tails[mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
            tails[lo] = x
            if lo == size:
                size += 1
        return size

    @numba.njit(cache=True)
    def _nb_mask_scan_lis(w):
        n = w.shape[0]
        best = 0
        for mask in range(1 << n):
            m = mask
            i = 0
            last = np.int64(0)
            length = 0
            ok = True
            while m != 0:
                if m & 1:
                    if w[i] < last:
                        ok = False
                        break
                    last = w[i]
                    length += 1
                m >>= 1
                i += 1
            if ok and length > best:
                best = length
        return best

    @numba.njit(cache=True)
    def _nb_path_end_and_max(z):
        n_rows, n = z.shape
        end = np.empty(n_rows)
        top = np.empty(n_rows)
        for t in range(n_rows):
            s = 0.0
            m = 0.0
            for i in range(n):
                s += z[t, i]
                if s > m:
                    m = s
            end[t] = s
            top[t] = m
        return end, top

    IMPLEMENTATIONS["numba"] = {
        "markov_letters": _nb_markov_letters,
        "patience_lis": _nb_patience_lis,
        "mask_scan_lis": _nb_mask_scan_lis,
        "path_end_and_max": _nb_path_end_and_max,
    }

_active = IMPLEMENTATIONS[BACKEND]
markov_letters = _active["markov_letters"]
patience_lis = _active["patience_lis"]
mask_scan_lis = _active["mask_scan_lis"]
path_end_and_max = _active["path_end_and_max"]
