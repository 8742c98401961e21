"""Minimum-weight search shared by the Hamming and symplectic code classes.

Two exact strategies:

* span enumeration over the projective messages, batched through numpy;
* support search on a parity-check matrix: the smallest set T of coordinate
  groups whose check columns are linearly dependent is exactly the minimum
  weight, because a dependency is a nonzero codeword supported inside T.

A coordinate group is the set of columns that count as one unit of weight:
``[j]`` for the Hamming metric, ``[j, n + j]`` for the symplectic one.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import ResourceCapError
from .field import GF
from .linalg import rank

ENUMERATION_CAP = 1 << 26
SUPPORT_SEARCH_CAP = 1 << 16
_LOW_TABLE = 1 << 14
_CHUNK = 1 << 18


def all_vectors(q: int, length: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows are the base-q digit vectors (most significant first) of start..stop-1."""
    if stop is None:
        stop = q**length
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, length), dtype=np.int64)
    for col in range(length - 1, -1, -1):
        idx, out[:, col] = np.divmod(idx, q)
    return out


def _combine(F: GF, coeffs: np.ndarray, rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros((coeffs.shape[0], rows.shape[1]), dtype=np.int64)
    return F.matmul(coeffs, rows)


def projective_span_chunks(F: GF, G: np.ndarray):
    """Yield blocks of codewords m·G, one per projective message m.

    Messages are taken in the order leading-1-then-free-tail: for each i the
    block ``(0, ..., 0, 1, x)`` with ``x`` ranging over F_q^i.
    """
    q = F.q
    k = G.shape[0]
    low_len = max(0, int(math.log(_LOW_TABLE, q)))
    for i in range(k):
        lead = G[k - 1 - i]
        tail = G[k - i :]
        L = min(i, low_len)
        low = _combine(F, all_vectors(q, L), tail[i - L :]) if L else np.zeros((1, G.shape[1]), np.int64)
        low = F.add(low, lead[None, :])
        high_rows = tail[: i - L]
        n_high = q ** (i - L)
        step = max(1, _CHUNK // low.shape[0])
        for s in range(0, n_high, step):
            e = min(n_high, s + step)
            high = _combine(F, all_vectors(q, i - L, s, e), high_rows)
            block = F.add(high[:, None, :], low[None, :, :])
            yield block.reshape(-1, G.shape[1])


def min_weight_enumerate(F: GF, G: np.ndarray, weight_fn, floor: int = 1) -> int:
    """Minimum of ``weight_fn`` over projective codewords; stops early at ``floor``."""
    k = G.shape[0]
    if F.q**k > ENUMERATION_CAP:
        raise ResourceCapError(
            f"q^k = {F.q}^{k} exceeds the enumeration cap 2^{ENUMERATION_CAP.bit_length() - 1}"
        )
    best = None
    for block in projective_span_chunks(F, G):
        m = int(weight_fn(block).min())
        if best is None or m < best:
            best = m
            if best <= floor:
                break
    return best


def min_weight_supports(F: GF, H: np.ndarray, groups: list[list[int]]) -> int:
    """Smallest number of groups whose columns of ``H`` are dependent.

    Returns 0 when no dependency exists, i.e. the code ker(H) is {0}.
    """
    n = len(groups)
    H = np.asarray(H, dtype=np.int64)
    budget = 0
    for s in range(1, n + 1):
        width = sum(len(g) for g in groups[:s])
        if H.shape[0] < width:
            # more columns than rows: any s-subset is dependent
            return s
        # refuse a whole level up front so the failure is fast and deterministic
        budget += math.comb(n, s)
        if budget > SUPPORT_SEARCH_CAP:
            raise ResourceCapError(
                f"support search at size {s} needs {budget} rank tests, over the cap 2^16"
            )
        for T in itertools.combinations(range(n), s):
            cols = [c for j in T for c in groups[j]]
            if rank(F, H[:, cols]) < len(cols):
                return s
    return 0
