"""Finite field arithmetic over GF(q).

Prime fields use plain modular arithmetic.  The small extension fields
GF(4), GF(8) and GF(9) are built from a primitive polynomial; an element is
encoded as the integer whose base-p digits are its polynomial coefficients
(lowest degree first), so every element is an int in ``range(q)``.

Vectors and matrices are numpy integer arrays holding such codes.  All array
helpers on :class:`GF` accept scalars or arrays and broadcast like numpy.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError

# Monic primitive polynomials, coefficients from x^0 upward.
PRIMITIVE_POLYNOMIALS = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, (2, 2, 1)),  # x^2 + 2x + 2
}

# Keeps int64 matrix products exact for the matrix sizes used here.
MAX_PRIME = 1 << 15


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _poly_mulmod(a, b, p, modulus):
    """Multiply coefficient lists a, b mod (p, modulus)."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, m - 1, -1):
        c = prod[deg]
        if c:
            for i in range(m + 1):
                prod[deg - m + i] = (prod[deg - m + i] - c * modulus[i]) % p
    return (prod + [0] * m)[:m]


def _encode(coeffs, p):
    return sum(c * p**i for i, c in enumerate(coeffs))


def _decode(x, p, m):
    return [(x // p**i) % p for i in range(m)]


class GF:
    """The finite field with ``q`` elements.

    Instances are interchangeable when ``q`` agrees; use :func:`field` to get
    a cached one.
    """

    def __init__(self, q: int):
        q = int(q)
        if q in PRIMITIVE_POLYNOMIALS:
            p, modulus = PRIMITIVE_POLYNOMIALS[q]
            m = len(modulus) - 1
        elif _is_prime(q):
            if q > MAX_PRIME:
                raise UsageError(f"prime field order {q} exceeds {MAX_PRIME}")
            p, m, modulus = q, 1, None
        else:
            raise UsageError(
                f"unsupported field order {q}: expected a prime or one of "
                f"{sorted(PRIMITIVE_POLYNOMIALS)}"
            )
        self.q = q
        self.characteristic = p
        self.extension_degree = m
        self.modulus = modulus
        self.exp_table = None
        self.log_table = None
        if m == 1:
            self.add_table = None
            self.mul_table = None
            self.neg_table = (-np.arange(q)) % q
            self.inv_table = np.array([0] + [pow(a, -1, q) for a in range(1, q)])
        else:
            self._build_extension_tables()

    def _build_extension_tables(self):
        q, p, m = self.q, self.characteristic, self.extension_degree
        digits = [_decode(x, p, m) for x in range(q)]
        add = np.array(
            [[_encode([(u + v) % p for u, v in zip(a, b)], p) for b in digits] for a in digits]
        )
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = [1] + [0] * (m - 1)
        alpha = [0, 1] + [0] * (m - 2)
        for i in range(q - 1):
            code = _encode(cur, p)
            if log[code] != -1:
                raise AssertionError(f"polynomial for GF({q}) is not primitive")
            exp[i] = code
            log[code] = i
            cur = _poly_mulmod(cur, alpha, p, self.modulus)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(1, q):
                mul[a, b] = exp[(log[a] + log[b]) % (q - 1)]
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = exp[(-log[a]) % (q - 1)]
        self.inv_table = inv
        self.exp_table = exp
        self.log_table = log

    @property
    def is_prime(self) -> bool:
        return self.extension_degree == 1

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"GF({self.q})"

    # -- validation -------------------------------------------------------

    def asarray(self, values) -> np.ndarray:
        """Return ``values`` as an int64 array, rejecting unreduced entries."""
        arr = np.asarray(values, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise UsageError(f"entries must lie in range({self.q})")
        return arr

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    # -- elementwise arithmetic ------------------------------------------

    def add(self, a, b):
        if self.is_prime:
            return (np.asarray(a) + np.asarray(b)) % self.q
        return self.add_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        if self.is_prime:
            return (np.asarray(a) - np.asarray(b)) % self.q
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        if self.is_prime:
            return (np.asarray(a) * np.asarray(b)) % self.q
        return self.mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise DomainError("zero has no multiplicative inverse")
        return self.inv_table[a]

    # -- reductions ------------------------------------------------------

    def sum(self, a, axis=-1):
        a = np.asarray(a)
        if self.is_prime:
            return a.sum(axis=axis) % self.q
        a = np.moveaxis(a, axis, 0)
        acc = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            acc = self.add_table[acc, row]
        return acc

    def dot(self, u, v):
        return self.sum(self.mul(u, v), axis=-1)

    def matmul(self, A, B):
        """Matrix product over the field; ``A`` may carry leading batch axes."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.is_prime:
            return (A @ B) % self.q
        prod = self.mul_table[A[..., :, :, None], B[..., None, :, :]]
        return self.sum(prod, axis=-2)


@functools.lru_cache(maxsize=None)
def field(q: int) -> GF:
    """Cached :class:`GF` instance for order ``q``."""
    return GF(q)


@dataclass(frozen=True)
class FieldElement:
    """A single element of ``GF(q)`` with operator overloads."""

    spec: GF
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise UsageError(f"{self.value} is not reduced modulo {self.spec.q}")
        object.__setattr__(self, "value", int(self.value))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise UsageError(f"cannot combine elements of {self.spec} and {other.spec}")
            return other.value
        raise UsageError(f"expected a FieldElement, got {type(other).__name__}")

    def _wrap(self, v) -> "FieldElement":
        return FieldElement(self.spec, int(v))

    def __add__(self, other):
        return self._wrap(self.spec.add(self.value, self._other(other)))

    def __sub__(self, other):
        return self._wrap(self.spec.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return self._wrap(self.spec.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return self * FieldElement(self.spec, self._other(other)).inverse()

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.spec.inv(self.value))

    def __int__(self):
        return self.value


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "inv": lambda a, b: a.inverse(),
    "neg": lambda a, b: -a,
}


def field_arithmetic(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Apply ``op`` (add, sub, mul, inv, neg) to field elements.

    ``b`` is ignored by the unary operations but, when given, must live in the
    same field as ``a``.
    """
    if op not in _OPS:
        raise UsageError(f"unknown field operation {op!r}")
    if b is not None:
        a._other(b)
    return _OPS[op](a, b)


# -- vectors over F_q ------------------------------------------------------


def _pair(F: GF, u, v):
    u, v = F.asarray(u), F.asarray(v)
    if u.shape[-1] != v.shape[-1]:
        raise UsageError(f"length mismatch: {u.shape[-1]} != {v.shape[-1]}")
    return u, v


def vec_add(F: GF, u, v) -> np.ndarray:
    u, v = _pair(F, u, v)
    return F.add(u, v)


def vec_scale(F: GF, scalar: int, u) -> np.ndarray:
    u = F.asarray(u)
    return F.mul(F.asarray(scalar), u)


def euclidean_dot(F: GF, u, v) -> int:
    u, v = _pair(F, u, v)
    return int(F.dot(u, v))


def hamming_weight(v) -> int:
    """Number of nonzero coordinates."""
    return int(np.count_nonzero(v))


def hamming_weights(rows) -> np.ndarray:
    """Row-wise Hamming weights of a 2-d array."""
    return np.count_nonzero(np.asarray(rows), axis=-1)
