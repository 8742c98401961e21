"""Exact counting: ball volumes, weight classes, entropies and N_h.

Everything returning a count is an exact Python ``int``.  Entropies are
evaluated with mpmath; comparisons between an exact integer and an
exponential of an entropy go through interval arithmetic and are only
decided when the interval clears the integer.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError, UsageError


def _check_radius(n: int, d: int) -> None:
    if n < 0:
        raise UsageError(f"length must be non-negative, got {n}")
    if d < 0 or d > n:
        raise UsageError(f"radius {d} outside 0..{n}")


@functools.lru_cache(maxsize=4096)
def weight_class_sizes(alphabet: int, n: int) -> tuple[int, ...]:
    """``C(n, w) * (alphabet - 1)**w`` for w = 0..n."""
    if alphabet < 2:
        raise UsageError("alphabet size must be at least 2")
    return tuple(math.comb(n, w) * (alphabet - 1) ** w for w in range(n + 1))


@functools.lru_cache(maxsize=4096)
def cumulative_volumes(alphabet: int, n: int) -> tuple[int, ...]:
    sizes = weight_class_sizes(alphabet, n)
    out, acc = [], 0
    for s in sizes:
        acc += s
        out.append(acc)
    return tuple(out)


def hamming_volume(q: int, n: int, d: int) -> int:
    """Number of vectors in F_q^n with Hamming weight at most ``d``."""
    if q < 2:
        raise UsageError("q must be at least 2")
    _check_radius(n, d)
    return cumulative_volumes(q, n)[d]


def symplectic_volume(q: int, n: int, d: int) -> int:
    """Number of vectors in F_q^{2n} with symplectic weight at most ``d``."""
    if q < 2:
        raise UsageError("q must be at least 2")
    _check_radius(n, d)
    return cumulative_volumes(q * q, n)[d]


# -- entropy -------------------------------------------------------------


@dataclass(frozen=True)
class EntropyValue:
    value: mpmath.mpf
    precision_bits: int

    def __float__(self):
        return float(self.value)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _entropy_expr(ctx, q: int, x):
    """H_q(x) evaluated in ``ctx`` (mpmath.mp or mpmath.iv); ``x`` in (0, 1)."""
    lnq = ctx.log(q)
    return (x * ctx.log(q - 1) - x * ctx.log(x) - (1 - x) * ctx.log(1 - x)) / lnq


def q_ary_entropy(q: int, x, precision: int = 53) -> EntropyValue:
    """H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x).

    ``q`` is the alphabet size, so pass ``q*q`` for the symplectic variant.
    ``x`` may be a Fraction, int, str or float and must lie in [0, 1 - 1/q].
    """
    q = int(q)
    if q < 2:
        raise DomainError("entropy base must be at least 2")
    xr = _as_fraction(x)
    if xr < 0 or xr > 1 - Fraction(1, q):
        raise DomainError(f"x = {x} outside [0, 1 - 1/{q}]")
    guard = 16
    with mpmath.workprec(precision + guard):
        if xr == 0:
            val = mpmath.mpf(0)
        elif xr == 1 - Fraction(1, q):
            val = mpmath.mpf(1)
        else:
            xm = mpmath.mpf(xr.numerator) / xr.denominator
            val = _entropy_expr(mpmath.mp, q, xm)
        val = +val
    return EntropyValue(val, precision)


@dataclass(frozen=True)
class VolumeEntropyCheck:
    """Outcome of comparing Vol_q(n, pn) against q^{H_q(p) n}."""

    q: int
    n: int
    p: Fraction
    volume: int
    holds: bool | None  # None when undecided at the maximum precision
    rate_ratio: float  # log_q(Vol)/n divided by H_q(p); diagnostic only


def volume_entropy_check(q: int, n: int, p, symplectic: bool = False, max_bits: int = 4096):
    """Certify ``Vol(n, pn) <= Q^{H_Q(p) n}`` with Q = q (or q^2 if symplectic).

    ``p * n`` must be an integer.  The right-hand side is enclosed in an
    interval; precision doubles until the interval is clear of the volume.
    """
    pr = _as_fraction(p)
    Q = q * q if symplectic else q
    if pr < 0 or pr > 1 - Fraction(1, Q):
        raise DomainError(f"p = {p} outside [0, 1 - 1/{Q}]")
    radius = pr * n
    if radius.denominator != 1:
        raise UsageError(f"p*n = {radius} is not an integer")
    radius = int(radius)
    vol = symplectic_volume(q, n, radius) if symplectic else hamming_volume(q, n, radius)

    with mpmath.workprec(64):
        if pr == 0:
            h = mpmath.mpf(0)
        else:
            h = q_ary_entropy(Q, pr, 64).value
        ratio = float(mpmath.log(vol, Q) / n / h) if h > 0 else 1.0

    # exact endpoints: H = 0 and H = 1
    if pr == 0:
        return VolumeEntropyCheck(q, n, pr, vol, vol <= 1, ratio)
    if pr == 1 - Fraction(1, Q):
        return VolumeEntropyCheck(q, n, pr, vol, vol <= Q**n, ratio)

    bits = 64
    holds = None
    iv = mpmath.iv
    while bits <= max_bits:
        iv.prec = bits
        x = iv.mpf(pr.numerator) / pr.denominator
        rhs = iv.exp(_entropy_expr(iv, Q, x) * n * iv.log(Q))
        if vol < rhs.a:
            holds = True
            break
        if vol > rhs.b:
            holds = False
            break
        bits *= 2
    iv.prec = 53
    return VolumeEntropyCheck(q, n, pr, vol, holds, ratio)


# -- symplectic counting -------------------------------------------------


def hyperplane_pair_count(q: int, h: int) -> int:
    """N_h: solutions in (F_q^2 minus 0)^h of one symplectic equation.

    The equation is ``sum_j (a_j y_j - b_j x_j) = 0`` with every coefficient
    pair (a_j, b_j) nonzero; the count does not depend on the coefficients.
    """
    if h < 0:
        raise UsageError("h must be non-negative")
    total = sum((-1) ** j * math.comb(h, j) * q ** (2 * h - 1 - 2 * j) for j in range(h))
    # the j = h term has exponent -1 and is handled by the standalone (-1)^h
    return total + (-1) ** h


def single_vector_intersection_formula(q: int, n: int, d: int, t: int) -> int:
    """|B^S(2n, d) ∩ <u>^⊥| for any u of symplectic weight ``t``, by weight classes."""
    _check_radius(n, d)
    if not 0 <= t <= n:
        raise UsageError(f"weight {t} outside 0..{n}")
    Q1 = q * q - 1
    N = [hyperplane_pair_count(q, h) for h in range(min(t, d) + 1)]
    total = 0
    for w in range(d + 1):
        for h in range(min(w, t) + 1):
            if w - h > n - t:
                continue
            total += math.comb(t, h) * math.comb(n - t, w - h) * Q1 ** (w - h) * N[h]
    return total
