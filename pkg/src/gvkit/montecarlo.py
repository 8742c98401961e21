"""Monte Carlo estimates and exact brute-force oracles.

Trials are processed in fixed-size blocks; block ``i`` draws from
``generator(seed, stream, i)``.  A run's result therefore depends only on
(seed, stream, trials, block size), never on how blocks are spread over
worker processes, and partial tallies merge by addition.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction

import mpmath
import numpy as np

from ._distance import all_vectors
from .bounds import alternating_sum, bonferroni_terms, projective_count
from .combinatorics import hamming_volume, symplectic_volume, weight_class_sizes
from .errors import ResourceCapError, UsageError
from .field import field, hamming_weights
from .linalg import rank
from .linear_codes import BallSampler, projective_message_array
from .rng import generator
from .symplectic import (
    ball_orthogonal_intersection_count,
    check_matrix,
    symbols_to_symplectic,
    symplectic_weights,
)

BLOCK = 8192
DEFAULT_CONFIDENCE = Fraction(99, 100)
TINY_CAP = 1 << 24
_HW_DENOM = 1 << 64


def hoeffding_halfwidth(trials: int, confidence=DEFAULT_CONFIDENCE) -> Fraction:
    """``sqrt(ln(2/alpha) / (2N))`` rounded up to a multiple of 2^-64."""
    if trials <= 0:
        raise UsageError("trials must be positive")
    alpha = 1 - Fraction(confidence)
    with mpmath.workprec(160):
        hw = mpmath.sqrt(mpmath.log(mpmath.mpf(2 * alpha.denominator) / alpha.numerator) / (2 * trials))
        num = int(mpmath.ceil(hw * _HW_DENOM)) + 1
    return Fraction(num, _HW_DENOM)


@dataclass(frozen=True)
class MonteCarloEstimate:
    successes: int
    trials: int
    seed: int
    stream_id: str
    confidence: Fraction = DEFAULT_CONFIDENCE
    extras: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise UsageError("need 0 <= successes <= trials")

    @property
    def p_hat(self) -> Fraction:
        return Fraction(self.successes, self.trials) if self.trials else Fraction(0)

    @property
    def halfwidth(self) -> Fraction:
        return hoeffding_halfwidth(self.trials, self.confidence)

    @property
    def ci_low(self) -> Fraction:
        return max(Fraction(0), self.p_hat - self.halfwidth)

    @property
    def ci_high(self) -> Fraction:
        return min(Fraction(1), self.p_hat + self.halfwidth)

    def contains(self, p) -> bool:
        return self.ci_low <= p <= self.ci_high

    def disjoint_from(self, other: "MonteCarloEstimate") -> bool:
        return self.ci_high < other.ci_low or other.ci_high < self.ci_low

    def merge(self, other: "MonteCarloEstimate") -> "MonteCarloEstimate":
        if (self.seed, self.stream_id, self.confidence) != (other.seed, other.stream_id, other.confidence):
            raise UsageError("can only merge tallies from the same seed, stream and confidence")
        return replace(self, successes=self.successes + other.successes, trials=self.trials + other.trials)


CSV_COLUMNS = ["q", "n", "k", "d", "ell", "trials", "successes", "p_hat", "ci_low", "ci_high", "seed"]


def _dec(x: Fraction) -> str:
    return f"{float(x):.12g}"


def estimate_row(est: MonteCarloEstimate, q, n, k, d, ell) -> dict:
    return {
        "q": q, "n": n, "k": "" if k is None else k, "d": d, "ell": "" if ell is None else ell,
        "trials": est.trials, "successes": est.successes, "p_hat": _dec(est.p_hat),
        "ci_low": _dec(est.ci_low), "ci_high": _dec(est.ci_high), "seed": est.seed,
    }


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# -- block runner -------------------------------------------------------


def _blocks(trials: int, block: int):
    return [(i, min(block, trials - i * block)) for i in range((trials + block - 1) // block)]


def _run_blocks(kernel, args, seed, stream, blocks):
    total = 0
    for i, size in blocks:
        total += kernel(generator(seed, stream, i), size, *args)
    return total


def _tally(kernel, args, trials, seed, stream, workers, block=BLOCK) -> int:
    blocks = _blocks(trials, block)
    if workers <= 1 or len(blocks) < 2:
        return _run_blocks(kernel, args, seed, stream, blocks)
    parts = [blocks[w::workers] for w in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(_run_blocks, kernel, args, seed, stream, p) for p in parts if p]
        return sum(f.result() for f in futs)


# -- ball sums ----------------------------------------------------------


def _ball_draw(rng, size, q, n, radius, metric):
    if metric == "hamming":
        return BallSampler(q, n, radius).sample(rng, size)
    return symbols_to_symplectic(BallSampler(q * q, n, radius).sample(rng, size), q)


def _sum_weight(F, vecs, metric):
    s = vecs[0]
    for v in vecs[1:]:
        s = F.add(s, v)
    return hamming_weights(s) if metric == "hamming" else symplectic_weights(s)


def _sum_in_ball_kernel(rng, size, q, n, radius, ell, metric):
    F = field(q)
    vecs = [_ball_draw(rng, size, q, n, radius, metric) for _ in range(ell)]
    return int(np.count_nonzero(_sum_weight(F, vecs, metric) <= radius))


def _orthogonal_block(rng, size, q, n, radius, ell):
    """Draw ``size`` candidate tuples; return (orthogonal mask, in-ball mask)."""
    F = field(q)
    vecs = [_ball_draw(rng, size, q, n, radius, "symplectic") for _ in range(ell)]
    ok = np.ones(size, dtype=bool)
    for i in range(ell):
        Hi = check_matrix(F, vecs[i])
        for j in range(i + 1, ell):
            ok &= F.dot(vecs[j], Hi) == 0
    return ok, _sum_weight(F, vecs, "symplectic") <= radius


def estimate_sum_in_ball(
    q: int, n: int, d: int, ell: int, trials: int, seed: int,
    metric: str = "hamming", orthogonal: bool = False, stream="sum-in-ball", workers: int = 1,
) -> MonteCarloEstimate:
    """Estimate Pr[v_1 + ... + v_ell in the ball] for i.i.d. uniform ball vectors.

    The ball has radius ``d - 1``.  With ``orthogonal=True`` (symplectic only)
    candidate tuples are drawn i.i.d. and kept only if pairwise orthogonal;
    ``extras['rejection_rate']`` records the discarded fraction.
    """
    if trials <= 0:
        raise UsageError("trials must be positive")
    if ell < 2:
        raise UsageError("ell must be at least 2")
    if metric not in ("hamming", "symplectic"):
        raise UsageError(f"unknown metric {metric!r}")
    if orthogonal and metric != "symplectic":
        raise UsageError("the orthogonal variant needs the symplectic metric")
    if not 1 <= d <= n + 1:
        raise UsageError(f"need 1 <= d <= n + 1, got d={d}")
    radius = d - 1
    stream = str(stream)
    if not orthogonal:
        hits = _tally(_sum_in_ball_kernel, (q, n, radius, ell, metric), trials, seed, stream, workers)
        return MonteCarloEstimate(hits, trials, seed, stream)

    hits, accepted, drawn, i = 0, 0, 0, 0
    while accepted < trials:
        ok, hit = _orthogonal_block(generator(seed, stream, i), BLOCK, q, n, radius, ell)
        idx = np.flatnonzero(ok)[: trials - accepted]
        hits += int(np.count_nonzero(hit[idx]))
        accepted += idx.size
        drawn += int(idx[-1]) + 1 if accepted == trials and idx.size else BLOCK
        i += 1
    rate = Fraction(drawn - accepted, drawn)
    return MonteCarloEstimate(hits, trials, seed, stream, extras={"rejection_rate": rate, "candidates": drawn})


# -- minimum distance failures -----------------------------------------


def _failure_kernel(rng, size, q, n, k, d):
    F = field(q)
    W = projective_message_array(q, k)
    G = F.random(rng, (size, k, n))
    cw = F.matmul(np.broadcast_to(W, (size,) + W.shape), G)
    return int(np.count_nonzero(hamming_weights(cw).min(axis=1) < d))


def estimate_min_distance_failure(
    q: int, n: int, k: int, d: int, trials: int, seed: int, stream="min-distance", workers: int = 1
) -> MonteCarloEstimate:
    """Fraction of uniform generator matrices whose code has distance < d.

    Rank-deficient draws count as failures because some projective message
    then encodes to the zero word.
    """
    if trials <= 0:
        raise UsageError("trials must be positive")
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= n, got k={k}, n={n}")
    if projective_count(q, k) * n > 1 << 16:
        raise ResourceCapError("projective codeword table too large for batched sampling")
    stream = str(stream)
    hits = _tally(_failure_kernel, (q, n, k, d), trials, seed, stream, workers, block=1024)
    return MonteCarloEstimate(hits, trials, seed, stream)


def _failing_counts(q: int, n: int, k: int, d: int) -> np.ndarray:
    """For every generator matrix, the number of projective messages of weight < d."""
    if q ** (k * n) > TINY_CAP:
        raise ResourceCapError(f"q^(kn) = {q}^{k * n} exceeds 2^24")
    F = field(q)
    W = projective_message_array(q, k)
    G = all_vectors(q, k * n).reshape(-1, k, n)
    out = []
    for s in range(0, G.shape[0], 4096):
        g = G[s : s + 4096]
        cw = F.matmul(np.broadcast_to(W, (g.shape[0],) + W.shape), g)
        out.append(np.count_nonzero(hamming_weights(cw) < d, axis=1))
    return np.concatenate(out)


def exact_failure_probability_tiny(q: int, n: int, k: int, d: int) -> Fraction:
    """Exact Pr over all q^(kn) generators that some projective codeword has weight < d."""
    if d <= 0:
        return Fraction(0)
    f = _failing_counts(q, n, k, d)
    return Fraction(int(np.count_nonzero(f)), q ** (k * n))


def exact_joint_bonferroni_sums(q: int, n: int, k: int, d: int) -> list[Fraction]:
    """S_i = sum over i-subsets X of W of Pr[all of X fail], for i = 1..|W|.

    Computed as the average over generators of C(f_G, i), f_G being the
    number of failing projective messages of G.
    """
    f = _failing_counts(q, n, k, d)
    W = projective_count(q, k)
    values, counts = np.unique(f, return_counts=True)
    total = q ** (k * n)
    return [
        Fraction(sum(math.comb(int(v), i) * int(c) for v, c in zip(values, counts)), total)
        for i in range(1, W + 1)
    ]


@dataclass(frozen=True)
class BracketRow:
    q: int
    n: int
    k: int
    d: int
    t: int
    source: str  # "joint" or "idealized"
    partial: Fraction
    exact: Fraction
    ok: bool


def bonferroni_bracket_rows(q: int, n: int, k: int, d: int) -> list[BracketRow]:
    """Check every truncation depth against the exact union probability.

    Joint sums must bracket for every t.  The idealized sums coincide with the
    joint ones while every i-subset of W is independent, which always holds
    for i <= 2, so they are checked there only.
    """
    exact = exact_failure_probability_tiny(q, n, k, d)
    joint = exact_joint_bonferroni_sums(q, n, k, d)
    W = projective_count(q, k)
    a = Fraction(hamming_volume(q, n, d - 1), q**n)
    ideal = bonferroni_terms(W, a, W)
    rows = []
    for t in range(1, W + 1):
        for source, terms in (("joint", joint), ("idealized", ideal)):
            if source == "idealized" and t > 2:
                continue
            partial = alternating_sum(terms[:t])
            ok = partial >= exact if t % 2 else partial <= exact
            rows.append(BracketRow(q, n, k, d, t, source, partial, exact, ok))
    return rows


# -- exact two-vector ball-sum probability ------------------------------


def exact_two_sum_probability(alphabet: int, n: int, radius: int) -> Fraction:
    """Pr[wt(v1 + v2) <= radius] for independent uniform v1, v2 in the ball.

    Works for any abelian alphabet of the given size, so pass ``q*q`` for the
    symplectic weight.  v2 overlaps v1 in i places, cancels it in j of them
    and takes one of ``alphabet - 2`` other values in the rest.
    """
    A = alphabet
    sizes = weight_class_sizes(A, n)
    vol = sum(sizes[: radius + 1])
    # tail[i][m] = sum_{j >= m} C(i, j) (A-2)^(i-j)
    tail = []
    for i in range(radius + 1):
        acc, row = 0, [0] * (i + 2)
        for j in range(i, -1, -1):
            acc += math.comb(i, j) * (A - 2) ** (i - j)
            row[j] = acc
        tail.append(row)
    total = 0
    for w1 in range(radius + 1):
        inner = 0
        for w2 in range(radius + 1):
            for i in range(min(w1, w2) + 1):
                if w2 - i > n - w1:
                    continue
                jmin = max(0, w1 + w2 - i - radius)
                if jmin > i:
                    continue
                inner += math.comb(w1, i) * math.comb(n - w1, w2 - i) * (A - 1) ** (w2 - i) * tail[i][jmin]
        total += sizes[w1] * inner
    return Fraction(total, vol * vol)


# -- intersection concentration ----------------------------------------


@dataclass(frozen=True)
class IntersectionSummary:
    q: int
    n: int
    d: int
    ell: int
    ratios: tuple
    orthogonal_ratios: tuple
    orthogonal_rejection_rate: Fraction | None

    @staticmethod
    def _stats(r):
        if not r:
            return None
        return min(r), statistics.median(r), max(r)

    @property
    def stats(self):
        return self._stats(self.ratios)

    @property
    def orthogonal_stats(self):
        return self._stats(self.orthogonal_ratios)

    def fraction_within(self, lo, hi, orthogonal=False) -> Fraction:
        r = self.orthogonal_ratios if orthogonal else self.ratios
        return Fraction(sum(1 for x in r if lo <= x <= hi), len(r))


def _independent_tuple(rng, F, q, n, radius, ell, orthogonal):
    tries = 0
    while True:
        tries += 1
        U = _ball_draw(rng, ell, q, n, radius, "symplectic")
        if rank(F, U) < ell:
            continue
        if orthogonal and np.any(F.matmul(U, check_matrix(F, U).T)):
            continue
        return U, tries


def verify_intersection_concentration(
    q: int, n: int, d: int, ell: int, samples: int, seed: int, stream="intersection", orthogonal: bool = True
) -> IntersectionSummary:
    """Ratios ``count * q^ell / Vol^S(2n, d-1)`` over random ball tuples.

    ``count`` is the exact size of the radius-(d-1) ball intersected with the
    symplectic complements of ell independent uniform ball vectors (redrawn
    on linear dependence).  The orthogonal variant additionally requires the
    tuple to be mutually orthogonal.
    """
    if ell < 0 or samples <= 0:
        raise UsageError("need ell >= 0 and samples > 0")
    radius = d - 1
    if not 0 <= radius <= n:
        raise UsageError(f"need 1 <= d <= n + 1, got d={d}")
    vol = symplectic_volume(q, n, radius)
    if ell == 0:
        return IntersectionSummary(q, n, d, 0, (Fraction(1),) * samples, (Fraction(1),) * samples, Fraction(0))
    F = field(q)
    stream = str(stream)
    ratios, oratios = [], []
    tries_total = 0
    for s in range(samples):
        rng = generator(seed, stream, s)
        U, _ = _independent_tuple(rng, F, q, n, radius, ell, False)
        ratios.append(Fraction(ball_orthogonal_intersection_count(q, n, radius, U) * q**ell, vol))
        if orthogonal:
            U, tries = _independent_tuple(rng, F, q, n, radius, ell, True)
            tries_total += tries
            oratios.append(Fraction(ball_orthogonal_intersection_count(q, n, radius, U) * q**ell, vol))
    rej = Fraction(tries_total - samples, tries_total) if orthogonal else None
    return IntersectionSummary(q, n, d, ell, tuple(ratios), tuple(oratios), rej)
