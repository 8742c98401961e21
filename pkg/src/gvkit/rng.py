"""Counter-based random streams.

Every random draw in gvkit comes from a Philox generator keyed by
``(seed, stream)`` and positioned at ``counter``.  Two calls with the same
triple produce identical output regardless of what else ran before, which is
what makes partitioned or parallel runs reproducible.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

_MASK64 = (1 << 64) - 1

DEFAULT_SEED = 0


def default_seed() -> int:
    """Seed from ``GVKIT_SEED`` when set, else 0."""
    value = os.environ.get("GVKIT_SEED")
    return int(value) if value not in (None, "") else DEFAULT_SEED


def stream_key(stream: int | str) -> int:
    if isinstance(stream, str):
        digest = hashlib.blake2b(stream.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    return int(stream) & _MASK64


def generator(seed: int, stream: int | str = 0, counter: int = 0) -> np.random.Generator:
    """Generator for the triple ``(seed, stream, counter)``.

    The counter occupies the third Philox counter word, so consecutive
    counters never overlap for fewer than 2**128 draws each.
    """
    key = ((int(seed) & _MASK64) << 64) | stream_key(stream)
    bitgen = np.random.Philox(key=key, counter=(int(counter) & _MASK64) << 128)
    return np.random.Generator(bitgen)


def uniform_below(rng: np.random.Generator, bound: int, size: int) -> list[int]:
    """``size`` exact uniform integers in ``[0, bound)`` for arbitrary ``bound``."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound <= 1 << 62:
        return rng.integers(0, bound, size=size, dtype=np.int64).tolist()
    bits = (bound - 1).bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    out: list[int] = []
    while len(out) < size:
        need = size - len(out)
        # acceptance rate is above 1/2, so 2*need candidates rarely fall short
        raw = rng.bytes(nbytes * 2 * need)
        for i in range(2 * need):
            x = int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") & mask
            if x < bound:
                out.append(x)
                if len(out) == size:
                    break
    return out
