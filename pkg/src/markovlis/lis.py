"""Longest weakly increasing subsequence lengths by three routes.

A weakly increasing subsequence of a word over {1, .., m} is a block of
1s, then 2s, and so on.  With N_r(k) = #{i <= k : X_i = r} and the
consecutive-letter imbalances D_r(k) = N_r(k) - N_{r+1}(k), the length of
the longest such subsequence satisfies

    LI_n = (n - sum_r r * D_r(n)) / m
           + max over 0 <= k_1 <= .. <= k_{m-1} <= n of sum_r D_r(k_r),

which a running-maximum recursion evaluates in O(n m) integer operations.
The other two routes are the classical patience algorithm (O(n log n))
and, for short words, an exhaustive scan of all 2^n subsequences; the
three must agree exactly.  The module also builds the full insertion
shape under row bumping, whose first row length equals LI_n.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chain import Word
from .errors import ParameterError

# exhaustive route allocates or scans 2^n states
BRUTE_FORCE_MAX = 22


@dataclass(frozen=True, eq=False)
class LatticeWalk:
    """Prefix letter counts of a word and their consecutive imbalances.

    prefix_counts[k, r-1] = N_r(k) for k = 0..n, and
    imbalance[k, r-1] = N_r(k) - N_{r+1}(k) for r = 1..m-1.
    """

    m: int
    prefix_counts: np.ndarray
    imbalance: np.ndarray


@dataclass(frozen=True)
class YoungShape:
    """Weakly decreasing positive row lengths of an insertion tableau."""

    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(r < 1 for r in self.rows):
            raise ParameterError("row lengths must be positive")
        if any(a < b for a, b in zip(self.rows, self.rows[1:])):
            raise ParameterError("row lengths must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.rows)


def build_walk(word: Word) -> LatticeWalk:
    """Tabulate prefix counts and imbalances for all prefixes of `word`."""
    n = len(word)
    m = word.m
    counts = np.zeros((n + 1, m), dtype=np.int64)
    if n:
        onehot = word.letters[:, None] == np.arange(1, m + 1, dtype=np.int64)
        np.cumsum(onehot, axis=0, out=counts[1:])
    return LatticeWalk(m, counts, counts[:, :-1] - counts[:, 1:])


def lis_bruteforce(word: Word) -> int:
    """Exhaustive oracle over all 2^n subsequences; limited to short words."""
    if len(word) > BRUTE_FORCE_MAX:
        raise ParameterError(
            f"exhaustive route handles n <= {BRUTE_FORCE_MAX}, got {len(word)}")
    return int(_kernels.mask_scan_lis(word.letters))


def lis_patience(word: Word) -> int:
    """Patience-pile count; ties go on top of the later pile, so the
    result counts weakly increasing runs."""
    return int(_kernels.patience_lis(word.letters))


def _li_from_imbalance(imbalance: np.ndarray) -> np.ndarray:
    """Evaluate the counting identity on imbalance tables.

    `imbalance` has shape (..., n+1, m-1), rows indexed by prefix length
    k = 0..n.  The nested max over k_1 <= .. <= k_{m-1} telescopes into
    m - 1 running-maximum passes.  Returns an int64 array of shape (...,).
    """
    *_, n1, m1 = imbalance.shape
    n = n1 - 1
    m = m1 + 1
    run = np.zeros(imbalance.shape[:-2] + (n1,), dtype=np.int64)
    for r in range(m1):
        run = np.maximum.accumulate(run + imbalance[..., r], axis=-1)
    weights = np.arange(1, m, dtype=np.int64)
    flat = n - imbalance[..., n1 - 1, :] @ weights
    return flat // m + run[..., -1]


def lis_combinatorial(word: Word) -> int:
    """Length via the prefix-imbalance identity (no subsequence search)."""
    walk = build_walk(word)
    return int(_li_from_imbalance(walk.imbalance))


def binary_li_block(letters: np.ndarray) -> np.ndarray:
    """Combinatorial route specialized to a block of binary words.

    `letters` is (trials, n) with values in {1, 2}.  For m = 2 the
    imbalance walk has increments 3 - 2x, and the identity reduces to
    (n - S_n)/2 + max_{0<=k<=n} S_k, all in int64.
    """
    n = letters.shape[1]
    z = 3 - 2 * letters.astype(np.int64)
    s = np.zeros((letters.shape[0], n + 1), dtype=np.int64)
    np.cumsum(z, axis=1, out=s[:, 1:])
    return (n - s[:, -1]) // 2 + s.max(axis=1)


def rsk_shape(word: Word) -> YoungShape:
    """Insertion shape under row bumping.

    An inserted letter bumps the leftmost strictly greater entry of the
    row (equal entries are passed over), so each row stays weakly
    increasing and the first row length equals the longest weakly
    increasing subsequence length.
    """
    rows: list[list[int]] = []
    for x in word.letters.tolist():
        cur = x
        placed = False
        for row in rows:
            i = bisect.bisect_right(row, cur)
            if i == len(row):
                row.append(cur)
                placed = True
                break
            row[i], cur = cur, row[i]
        if not placed:
            rows.append([cur])
    return YoungShape(tuple(len(r) for r in rows))
