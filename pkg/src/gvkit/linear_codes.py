"""Random [n, k]_q linear codes and uniform Hamming-ball sampling."""

from __future__ import annotations

import bisect
import functools
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import _distance
from .combinatorics import cumulative_volumes, weight_class_sizes
from .errors import UsageError
from .field import GF, field, hamming_weights
from .linalg import nullspace, rank
from .rng import generator, uniform_below


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Code spanned by the rows of a k×n generator matrix over GF(q)."""

    spec: GF
    generator: np.ndarray

    def __post_init__(self):
        G = self.spec.asarray(self.generator)
        if G.ndim != 2:
            raise UsageError("generator must be a 2-d matrix")
        G = G.copy()
        G.setflags(write=False)
        object.__setattr__(self, "generator", G)

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @functools.cached_property
    def rank(self) -> int:
        return rank(self.spec, self.generator)

    @property
    def full_rank(self) -> bool:
        return self.rank == self.k

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and other.spec == self.spec
            and np.array_equal(other.generator, self.generator)
        )

    def __hash__(self):
        return hash((self.q, self.generator.tobytes(), self.generator.shape))

    def to_text(self) -> str:
        lines = [f"{self.q} {self.n} {self.k}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.generator]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearCode":
        q, n, k, rows = parse_code_text(text)
        return cls(field(q), np.array(rows, dtype=np.int64).reshape(k, n))


def parse_code_text(text: str):
    """Parse ``q n k`` followed by k rows; returns (q, n, k, rows)."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 3:
        raise UsageError("code text must start with a 'q n k' header")
    q, n, k = (int(x) for x in lines[0])
    rows = [[int(x) for x in ln] for ln in lines[1:]]
    if len(rows) != k or any(len(r) != n for r in rows):
        raise UsageError(f"expected {k} rows of {n} entries")
    return q, n, k, rows


def sample_generator_matrix(q: int, k: int, n: int, seed: int, stream="generator") -> LinearCode:
    """Uniform k×n generator matrix; a pure function of (seed, stream)."""
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= n, got k={k}, n={n}")
    F = field(q)
    rng = generator(seed, stream)
    return LinearCode(F, F.random(rng, (k, n)))


def encode(message, code: LinearCode) -> np.ndarray:
    m = code.spec.asarray(message)
    if m.shape[-1] != code.k:
        raise UsageError(f"message length {m.shape[-1]} != k = {code.k}")
    return code.spec.matmul(m[None, :] if m.ndim == 1 else m, code.generator).reshape(
        m.shape[:-1] + (code.n,)
    )


def projective_messages(q: int, k: int):
    """One representative per scalar class of nonzero messages in F_q^k.

    Yields ``(0, ..., 0, 1, x)`` for x in F_q^i, i = 0..k-1, as int arrays.
    """
    if k < 1:
        raise UsageError("k must be at least 1")
    for i in range(k):
        for x in itertools.product(range(q), repeat=i):
            m = np.zeros(k, dtype=np.int64)
            m[k - 1 - i] = 1
            m[k - i :] = x
            yield m


def projective_message_array(q: int, k: int) -> np.ndarray:
    blocks = []
    for i in range(k):
        tail = _distance.all_vectors(q, i)
        block = np.zeros((tail.shape[0], k), dtype=np.int64)
        block[:, k - 1 - i] = 1
        block[:, k - i :] = tail
        blocks.append(block)
    return np.vstack(blocks)


def projective_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def min_hamming_distance(code: LinearCode, method: str = "auto") -> int:
    """Exact minimum distance; 0 iff the generator is rank-deficient.

    ``method`` is ``enumerate`` (projective span), ``supports`` (check-matrix
    column dependencies) or ``auto`` (enumerate unless q^k exceeds the cap).
    """
    if code.k < 1:
        raise UsageError("k must be at least 1")
    if not code.full_rank:
        return 0
    F = code.spec
    if method == "auto":
        method = "enumerate" if F.q**code.k <= _distance.ENUMERATION_CAP else "supports"
    if method == "enumerate":
        return _distance.min_weight_enumerate(F, code.generator, hamming_weights)
    if method == "supports":
        H = nullspace(F, code.generator)
        if H.shape[0] == 0:
            return 1  # the whole space
        return _distance.min_weight_supports(F, H, [[j] for j in range(code.n)])
    raise UsageError(f"unknown method {method!r}")


# -- uniform ball sampling ----------------------------------------------


@dataclass(frozen=True)
class BallSampler:
    """Exact uniform sampler for the radius-``radius`` ball in an alphabet-``alphabet`` space.

    Symbols are integers in ``range(alphabet)``; for the symplectic ball use
    ``alphabet = q*q`` and split symbols with :func:`symbols_to_symplectic`.
    """

    alphabet: int
    n: int
    radius: int
    weight_counts: tuple = dc_field(init=False, repr=False)
    cumulative: tuple = dc_field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.radius <= self.n:
            raise UsageError(f"radius {self.radius} outside 0..{self.n}")
        counts = weight_class_sizes(self.alphabet, self.n)[: self.radius + 1]
        object.__setattr__(self, "weight_counts", counts)
        object.__setattr__(self, "cumulative", cumulative_volumes(self.alphabet, self.n)[: self.radius + 1])

    @property
    def volume(self) -> int:
        return self.cumulative[-1]

    def weight_distribution(self) -> list[Fraction]:
        return [Fraction(c, self.volume) for c in self.weight_counts]

    def sample_weights(self, rng: np.random.Generator, size: int) -> np.ndarray:
        vol = self.volume
        if vol < (1 << 62):
            r = rng.integers(0, vol, size=size, dtype=np.int64)
            cum = np.array(self.cumulative, dtype=np.int64)
            return np.searchsorted(cum, r, side="right")
        cum = self.cumulative
        return np.array([bisect.bisect_right(cum, r) for r in uniform_below(rng, vol, size)], dtype=np.int64)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """``size`` independent uniform ball members as a (size, n) array."""
        w = self.sample_weights(rng, size)
        order = rng.permuted(np.tile(np.arange(self.n), (size, 1)), axis=1)
        mask = order < w[:, None]
        values = rng.integers(1, self.alphabet, size=(size, self.n), dtype=np.int64)
        return np.where(mask, values, 0)


def hamming_ball_sampler(q: int, n: int, radius: int) -> BallSampler:
    return BallSampler(q, n, radius)


def sample_uniform_ball(sampler: BallSampler, seed: int, size: int | None = None, stream="ball"):
    """Uniform draw(s) from the sampler's ball, reproducible from (seed, stream)."""
    rng = generator(seed, stream)
    out = sampler.sample(rng, 1 if size is None else size)
    return out[0] if size is None else out
