"""Symplectic geometry on F_q^{2n} and self-orthogonal codes.

A vector of F_q^{2n} is stored as a flat array ``(a_1..a_n, b_1..b_n)``.
The symplectic form is ``<(a|b), (a'|b')> = a·b' - b·a'`` and the
symplectic weight counts indices j with ``(a_j, b_j) != (0, 0)``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from . import _distance
from .combinatorics import symplectic_volume
from .errors import DomainError, ResourceCapError, UsageError
from .field import GF, field
from .linalg import in_row_space, nullspace, rank
from .linear_codes import BallSampler, parse_code_text
from .rng import generator

INTERSECTION_CAP = 1 << 28
_BALL_CACHE_ROWS = 1 << 21
_CHUNK = 1 << 16


def _half(v) -> int:
    length = np.shape(v)[-1]
    if length % 2:
        raise UsageError(f"symplectic vectors need even length, got {length}")
    return length // 2


def split(v):
    n = _half(v)
    v = np.asarray(v)
    return v[..., :n], v[..., n:]


def join(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise UsageError("a and b halves must have equal shape")
    return np.concatenate([a, b], axis=-1)


def check_matrix(F: GF, U) -> np.ndarray:
    """Rows ``(b | -a)`` so that ``check_matrix(U) @ v`` lists ``<v, u_i>``."""
    U = np.atleast_2d(np.asarray(U, dtype=np.int64))
    a, b = split(U)
    return np.concatenate([b, F.neg(a)], axis=-1)


def symplectic_inner(F: GF, u, v) -> int:
    """``a·b' - b·a'`` for u = (a|b), v = (a'|b')."""
    u, v = F.asarray(u), F.asarray(v)
    if u.shape != v.shape:
        raise UsageError(f"shape mismatch {u.shape} vs {v.shape}")
    a, b = split(u)
    a2, b2 = split(v)
    return int(F.sub(F.dot(a, b2), F.dot(b, a2)))


def symplectic_weights(V) -> np.ndarray:
    a, b = split(V)
    return np.count_nonzero((a != 0) | (b != 0), axis=-1)


def symplectic_weight(v, indices=None) -> int:
    """Symplectic weight of ``v``, optionally restricted to 0-based ``indices``."""
    a, b = split(v)
    nz = (a != 0) | (b != 0)
    if indices is None:
        return int(np.count_nonzero(nz))
    idx = list(indices)
    n = nz.shape[-1]
    if any(not 0 <= i < n for i in idx):
        raise UsageError(f"index set must lie in 0..{n - 1}")
    return int(np.count_nonzero(nz[sorted(set(idx))]))


def symplectic_support_groups(n: int) -> list[list[int]]:
    return [[j, n + j] for j in range(n)]


def vector_to_text(v) -> str:
    a, b = split(v)
    return " ".join(map(str, a.tolist())) + " | " + " ".join(map(str, b.tolist()))


def vector_from_text(text: str) -> np.ndarray:
    if "|" not in text:
        raise UsageError("symplectic vector text needs an 'a | b' separator")
    left, right = text.split("|", 1)
    return join([int(x) for x in left.split()], [int(x) for x in right.split()])


# -- codes ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymplecticCode:
    """Span of the rows of a k×2n generator matrix."""

    spec: GF
    generator: np.ndarray

    def __post_init__(self):
        G = self.spec.asarray(self.generator)
        if G.ndim != 2:
            raise UsageError("generator must be a 2-d matrix")
        _half(G)
        G = G.copy()
        G.setflags(write=False)
        object.__setattr__(self, "generator", G)

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def n(self) -> int:
        return self.generator.shape[1] // 2

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @functools.cached_property
    def rank(self) -> int:
        return rank(self.spec, self.generator) if self.k else 0

    @functools.cached_property
    def self_orthogonal(self) -> bool:
        if self.k == 0:
            return True
        gram = self.spec.matmul(self.generator, check_matrix(self.spec, self.generator).T)
        return not np.any(gram)

    def contains(self, v) -> bool:
        return in_row_space(self.spec, self.generator, np.asarray(v))

    def to_text(self) -> str:
        lines = [f"{self.q} {2 * self.n} {self.k}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.generator]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SymplecticCode":
        q, n2, k, rows = parse_code_text(text)
        return cls(field(q), np.array(rows, dtype=np.int64).reshape(k, n2))


def symplectic_dual(C: SymplecticCode) -> SymplecticCode:
    """Basis of ``{w : <w, c> = 0 for all c in C}``; dimension 2n - rank(C)."""
    F = C.spec
    if C.k == 0:
        return SymplecticCode(F, np.eye(2 * C.n, dtype=np.int64))
    return SymplecticCode(F, nullspace(F, check_matrix(F, C.generator)))


def sample_self_orthogonal_code(q: int, n: int, k: int, seed: int, stream="self-orthogonal") -> SymplecticCode:
    """Grow a basis one row at a time, each row uniform on span^⊥ minus span.

    Since the partial span is itself self-orthogonal it sits inside its
    symplectic complement, so rejecting span members leaves exactly the
    admissible set.  Acceptance probability is at least 1 - q^(2i - 2n).
    """
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= n, got k={k}, n={n}")
    F = field(q)
    rng = generator(seed, stream)
    rows = np.zeros((0, 2 * n), dtype=np.int64)
    for _ in range(k):
        D = nullspace(F, check_matrix(F, rows), ncols=2 * n) if rows.shape[0] else np.eye(2 * n, dtype=np.int64)
        while True:
            coeffs = F.random(rng, (1, D.shape[0]))
            v = F.matmul(coeffs, D)[0]
            if not in_row_space(F, rows, v):
                break
        rows = np.vstack([rows, v[None, :]])
    return SymplecticCode(F, rows)


def min_symplectic_distance(C: SymplecticCode, method: str = "auto") -> int:
    """Exact minimum symplectic weight over nonzero codewords.

    Returns 0 for a rank-deficient generator (a nonzero message maps to 0).
    ``supports`` searches column dependencies of a check matrix instead of
    enumerating codewords and has no q^k cap.
    """
    if C.k < 1:
        raise UsageError("k must be at least 1")
    if C.rank < C.k:
        return 0
    F = C.spec
    if method == "auto":
        method = "enumerate" if F.q**C.k <= _distance.ENUMERATION_CAP else "supports"
    if method == "enumerate":
        return _distance.min_weight_enumerate(F, C.generator, symplectic_weights)
    if method == "supports":
        # C = (C^⊥S)^⊥S, so a check matrix for C comes from its dual's basis
        D = symplectic_dual(C).generator
        if D.shape[0] == 0:
            return 1
        return _distance.min_weight_supports(F, check_matrix(F, D), symplectic_support_groups(C.n))
    raise UsageError(f"unknown method {method!r}")


def dual_distance(C: SymplecticCode) -> int:
    """d_S(C^⊥S) via check-column dependencies of C itself."""
    F = C.spec
    if C.k == 0:
        return 1
    return _distance.min_weight_supports(F, check_matrix(F, C.generator), symplectic_support_groups(C.n))


@dataclass(frozen=True)
class QuantumParams:
    n: int
    logical: int
    d: int
    q: int

    def __str__(self):
        return f"[[{self.n},{self.logical},{self.d}]]_{self.q}"


def to_quantum_params(C: SymplecticCode) -> QuantumParams:
    """[[n, n-k, d_S(C^⊥S)]] for a self-orthogonal C."""
    if not C.self_orthogonal:
        raise DomainError("code is not symplectic self-orthogonal")
    if C.k > C.n:
        raise DomainError(f"k = {C.k} exceeds n = {C.n}")
    return QuantumParams(C.n, C.n - C.rank, dual_distance(C), C.q)


# -- intersection counting ----------------------------------------------


def symbols_to_symplectic(S: np.ndarray, q: int) -> np.ndarray:
    """Map symbols of range(q*q) to (a | b) with (a_j, b_j) = divmod(s_j, q)."""
    a, b = np.divmod(S, q)
    return np.concatenate([a, b], axis=-1)


def symplectic_ball_sampler(q: int, n: int, radius: int) -> BallSampler:
    return BallSampler(q * q, n, radius)


def sample_symplectic_ball(sampler: BallSampler, q: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` uniform members of B^S(2n, radius) as (size, 2n) rows."""
    return symbols_to_symplectic(sampler.sample(rng, size), q)


@functools.lru_cache(maxsize=16)
def _ball_array(q: int, n: int, d: int) -> np.ndarray:
    """Every vector of B^S(2n, d) as rows, grouped by weight."""
    Q = q * q
    parts = [np.zeros((1, n), dtype=np.int64)]
    for w in range(1, d + 1):
        supports = np.array(list(_combinations(n, w)), dtype=np.int64)
        symbols = _distance.all_vectors(Q - 1, w) + 1
        block = np.zeros((supports.shape[0], symbols.shape[0], n), dtype=np.int64)
        rows = np.arange(supports.shape[0])[:, None, None]
        mids = np.arange(symbols.shape[0])[None, :, None]
        block[rows, mids, supports[:, None, :]] = symbols[None, :, :]
        parts.append(block.reshape(-1, n))
    out = symbols_to_symplectic(np.vstack(parts), q)
    out.setflags(write=False)
    return out


def _combinations(n, w):
    return itertools.combinations(range(n), w)


def _enumerated_chunks(q: int, n: int, d: int):
    vol = symplectic_volume(q, n, d)
    total = q ** (2 * n)
    use_ball = vol * 4 < total
    size = vol if use_ball else total
    if size > INTERSECTION_CAP:
        raise ResourceCapError(
            f"exact intersection would enumerate {size} vectors (cap 2^28); "
            "use the Monte Carlo verifier instead"
        )
    if use_ball:
        if vol <= _BALL_CACHE_ROWS:
            yield _ball_array(q, n, d)
        else:
            yield from _ball_chunks(q, n, d)
        return
    for s in range(0, total, _CHUNK):
        V = _distance.all_vectors(q, 2 * n, s, min(total, s + _CHUNK))
        if d < n:
            V = V[symplectic_weights(V) <= d]
        yield V


def _ball_chunks(q: int, n: int, d: int):
    Q = q * q
    yield np.zeros((1, 2 * n), dtype=np.int64)
    for w in range(1, d + 1):
        symbols = _distance.all_vectors(Q - 1, w) + 1
        for T in _combinations(n, w):
            for s in range(0, symbols.shape[0], _CHUNK):
                sym = symbols[s : s + _CHUNK]
                S = np.zeros((sym.shape[0], n), dtype=np.int64)
                S[:, list(T)] = sym
                yield symbols_to_symplectic(S, q)


def ball_orthogonal_intersection_count(q: int, n: int, d: int, U=()) -> int:
    """|B^S(2n, d) ∩ <u_1>^⊥ ∩ ... ∩ <u_l>^⊥| by exact enumeration.

    The ball is enumerated directly when it is under a quarter of the space,
    otherwise the whole space is scanned and filtered by weight.  Either way
    the enumerated set is capped at 2^28 vectors.
    """
    if not 0 <= d <= n:
        raise UsageError(f"radius {d} outside 0..{n}")
    F = field(q)
    U = np.asarray(U, dtype=np.int64).reshape(-1, 2 * n)
    if U.shape[0] == 0:
        return symplectic_volume(q, n, d)
    Hc = check_matrix(F, F.asarray(U)).T
    count = 0
    for V in _enumerated_chunks(q, n, d):
        vals = F.matmul(V, Hc)
        count += int(np.count_nonzero(~np.any(vals, axis=1)))
    return count
