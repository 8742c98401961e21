"""Acceptance criteria, one check per criterion.

Each ``check_*`` returns ``(ok, detail)``.  The pytest wrappers assert ``ok``
and ``conftest.py`` prints one PASS/FAIL line per criterion after the run.
Run this file directly for the same lines without pytest.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from gvkit.bounds import (
    CodeParams,
    certify_classical,
    feng_ma_condition,
    quantum_hamming_check,
    quantum_improved_certify,
    quantum_singleton_check,
    quantum_union_certify,
)
from gvkit.combinatorics import hyperplane_pair_count, symplectic_volume
from gvkit.field import field
from gvkit.montecarlo import (
    estimate_min_distance_failure,
    estimate_sum_in_ball,
    exact_failure_probability_tiny,
    exact_joint_bonferroni_sums,
    exact_two_sum_probability,
    verify_intersection_concentration,
)
from gvkit.symplectic import (
    ball_orthogonal_intersection_count,
    sample_self_orthogonal_code,
    symplectic_dual,
    symplectic_weight,
    to_quantum_params,
)

SEED = 20240601


# -- independent oracles --------------------------------------------------


def _joint_sums_by_subsets(n, k, d):
    """S_i by listing every i-subset of projective messages for every G (q = 2)."""
    W = [m for m in itertools.product((0, 1), repeat=k) if any(m)]
    S = [0] * len(W)
    for g in itertools.product((0, 1), repeat=k * n):
        G = np.array(g).reshape(k, n)
        light = [int(np.count_nonzero(np.array(m) @ G % 2)) < d for m in W]
        for i in range(1, len(W) + 1):
            S[i - 1] += sum(all(light[j] for j in X) for X in itertools.combinations(range(len(W)), i))
    total = 2 ** (k * n)
    return [Fraction(s, total) for s in S]


def _brute_N(q, coeffs):
    """Nonzero pairs (x_j, y_j) with sum a_j y_j - b_j x_j = 0, by numpy enumeration."""
    F = field(q)
    h = len(coeffs)
    if h == 0:
        return 1
    pairs = np.array([(x, y) for x in range(q) for y in range(q) if (x, y) != (0, 0)])
    idx = np.array(list(itertools.product(range(len(pairs)), repeat=h)))
    total = np.zeros(idx.shape[0], dtype=np.int64)
    for j, (a, b) in enumerate(coeffs):
        x, y = pairs[idx[:, j], 0], pairs[idx[:, j], 1]
        total = F.add(total, F.sub(F.mul(a, y), F.mul(b, x)))
    return int(np.count_nonzero(total == 0))


def _double_sum(q, n, radius, t, N):
    Q1 = q * q - 1
    return sum(
        math.comb(t, h) * math.comb(n - t, w - h) * Q1 ** (w - h) * N[h]
        for w in range(radius + 1)
        for h in range(min(w, t) + 1)
        if w - h <= n - t
    )


def _vol_s(q, n, r):
    return sum(math.comb(n, i) * (q * q - 1) ** i for i in range(r + 1))


# -- criteria -------------------------------------------------------------


def check_bonferroni_bracketing():
    rows = 0
    for n in range(1, 5):
        for k in (1, 2):
            if k > n:
                continue
            for d in range(1, n + 1):
                exact = exact_failure_probability_tiny(2, n, k, d)
                joint = exact_joint_bonferroni_sums(2, n, k, d)
                if joint != _joint_sums_by_subsets(n, k, d):
                    return False, f"joint sums disagree between oracles at n={n} k={k} d={d}"
                for t in range(1, len(joint) + 1):
                    partial = sum((-1) ** i * s for i, s in enumerate(joint[:t]))
                    ok = partial >= exact if t % 2 else partial <= exact
                    rows += 1
                    if not ok:
                        return False, f"bracket broken at n={n} k={k} d={d} t={t}"
    return True, f"{rows} truncations bracket the exact union probability"


def check_nh_closed_form():
    rng = np.random.default_rng(SEED)
    checked = 0
    for q in (2, 3, 5):
        for h in range(5):
            closed = hyperplane_pair_count(q, h)
            for _ in range(3):
                coeffs = []
                while len(coeffs) < h:
                    a, b = (int(x) for x in rng.integers(0, q, 2))
                    if (a, b) != (0, 0):
                        coeffs.append((a, b))
                brute = _brute_N(q, coeffs)
                checked += 1
                if brute != closed:
                    return False, f"q={q} h={h} coeffs={coeffs}: closed {closed} vs brute {brute}"
    return True, f"{checked} coefficient patterns match"


def check_single_vector_intersection():
    rng = np.random.default_rng(SEED + 1)
    N = [_brute_N(2, [(1, 1)] * h) for h in range(7)]
    checked = 0
    for n in range(1, 7):
        for _ in range(100):
            u = rng.integers(0, 2, 2 * n)
            while not u.any():
                u = rng.integers(0, 2, 2 * n)
            t = symplectic_weight(u)
            for radius in range(n + 1):
                got = ball_orthogonal_intersection_count(2, n, radius, [u])
                want = _double_sum(2, n, radius, t, N)
                checked += 1
                if got != want:
                    return False, f"n={n} radius={radius} u={u.tolist()}: {got} vs {want}"
    return True, f"{checked} (n, d, u) triples match"


def check_warmup_chain():
    strict = []
    for q in (2, 3):
        for n in (64, 128):
            for delta in (Fraction(1, 10), Fraction(1, 5), Fraction(3, 10)):
                d = math.floor(delta * n) + 1
                ku = certify_classical(q, n, d, "union")[0]
                kw = certify_classical(q, n, d, "warmup17")[0]
                kb, rep = certify_classical(q, n, d, "bonferroni_t", h=1)
                if not ku <= kw <= kb:
                    return False, f"chain broken at q={q} n={n} d={d}: {ku}, {kw}, {kb}"
                if kb > ku:
                    strict.append(f"q={q} n={n} d={d} t={rep.extras['requested_t']}: {ku}->{kb}")
    if not strict:
        return False, "no grid point improves on the union bound"
    return True, f"{len(strict)}/12 strict, e.g. {strict[0]}"


def _quantum_grid(size=200):
    """``size`` distinct random (q, n, k, d) in the quantum domain with n <= 30."""
    pts = [
        (q, n, k, d)
        for q in (2, 3)
        for n in range(1, 31)
        for k in range(1, n + 1)
        for d in range(1, n + 1)
        if Fraction(d, n) < 1 - Fraction(1, q * q)
    ]
    rng = np.random.default_rng(SEED + 3)
    return [pts[i] for i in sorted(rng.choice(len(pts), size, replace=False))]


def check_quantum_chain():
    pts = _quantum_grid()
    for q, n, k, d in pts:
        direct = (q ** (2 * n - k) - 1) * _vol_s(q, n, d - 1) < q ** (2 * n)
        if quantum_union_certify(CodeParams(q, n, k, d)).certified != direct:
            return False, f"union disagrees with direct evaluation at {(q, n, k, d)}"
    gained = 0
    for q in (2, 3):
        for n in (16, 32, 64):
            for k in range(1, n + 1):
                ratio_sq = Fraction(n * (q - 1) ** 2) / (1 - Fraction(1, q ** (2 * n - k))) ** 2
                if ratio_sq <= 1:
                    continue
                for d in range(1, n + 1):
                    p = CodeParams(q, n, k, d)
                    if not p.quantum_domain:
                        break
                    union = quantum_union_certify(p).certified
                    improved = quantum_improved_certify(p, c=1, t=1).criterion_met
                    if union and not improved:
                        return False, f"union certifies {(q, n, k, d)} but the sqrt(n) condition does not"
                    if improved and not union:
                        gained += 1
                        # as bounds on q^(2n-k) - 1: union RHS q^(2n)/Vol, improved (q-1) sqrt(n) q^(2n)/Vol
                        if not (q - 1) ** 2 * n > 1:
                            return False, f"no sqrt(n) gap at {(q, n, k, d)}"
    if not gained:
        return False, "the sqrt(n) condition never certifies beyond the union bound"
    return True, f"200 direct checks; superset strict by {gained} points"


def check_tight_instances():
    checks = {
        "hamming [[5,1,3]]": quantum_hamming_check(2, 5, 1, 3) and 2 ** 4 == _vol_s(2, 5, 1) == 16,
        "singleton [[5,1,3]]": quantum_singleton_check(2, 5, 1, 3) and 5 == 1 + 2 * 3 - 2,
        "feng-ma d=2": feng_ma_condition(2, 10, 6, 2),
        "feng-ma d=3 false": not feng_ma_condition(2, 10, 6, 3),
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, "all tight" if not bad else f"failed: {bad}"


def check_sampler_soundness():
    rng = np.random.default_rng(SEED + 7)
    for i in range(1000):
        q = int(rng.choice([2, 3]))
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, n + 1))
        C = sample_self_orthogonal_code(q, n, k, SEED, stream=f"acceptance-{i}")
        D = symplectic_dual(C)
        if not (C.self_orthogonal and C.rank == k and D.k == 2 * n - k and all(D.contains(r) for r in C.generator)):
            return False, f"code {i} (q={q} n={n} k={k}) is not sound"
        qp = to_quantum_params(C)
        if not quantum_singleton_check(q, qp.n, qp.logical, qp.d):
            return False, f"code {i} gives {qp}, violating the singleton bound"
    return True, "1000 codes sound"


def check_ball_sum_decay():
    parts, ok_all = [], True
    for metric in ("hamming", "symplectic"):
        ests = {}
        for n in (100, 200):
            d = n * 2 // 5 + 1
            ests[n] = estimate_sum_in_ball(2, n, d, 2, 10**5, SEED, metric=metric, stream=f"decay-{metric}-{n}")
        a, b = ests[100], ests[200]
        ok = b.p_hat < a.p_hat and a.disjoint_from(b)
        ok_all &= ok
        A = 2 if metric == "hamming" else 4
        exact = [float(exact_two_sum_probability(A, n, n * 2 // 5)) for n in (100, 200)]
        parts.append(
            f"{metric}: p_hat {float(a.p_hat):.3g}/{float(b.p_hat):.3g} "
            f"(exact {exact[0]:.2g}/{exact[1]:.2g}) {'ok' if ok else 'CIs overlap'}"
        )
    return ok_all, "; ".join(parts)


def check_intersection_concentration():
    parts = []
    for ell in (1, 2):
        s = verify_intersection_concentration(2, 8, 5, ell, 200, SEED, stream=f"acceptance-ell{ell}")
        frac = s.fraction_within(Fraction(2, 5), Fraction(5, 2))
        mu, mo = s.stats[1], s.orthogonal_stats[1]
        if frac < Fraction(9, 10):
            return False, f"ell={ell}: only {float(frac):.2%} within [0.4, 2.5]"
        if not mu / 2 <= mo <= 2 * mu:
            return False, f"ell={ell}: medians {float(mu):.3f} vs {float(mo):.3f}"
        parts.append(f"ell={ell}: {float(frac):.0%} within, medians {float(mu):.3f}/{float(mo):.3f}")
    return True, "; ".join(parts)


def check_calibration():
    p = Fraction(1, 16)
    assert exact_failure_probability_tiny(2, 4, 1, 1) == p
    hits = sum(
        estimate_min_distance_failure(2, 4, 1, 1, 10**4, SEED, stream=f"calibration-{i}").contains(p)
        for i in range(100)
    )
    return hits >= 97, f"{hits}/100 intervals contain 1/16"


CRITERIA = [
    ("1 bonferroni bracketing", check_bonferroni_bracketing),
    ("2 N_h closed form", check_nh_closed_form),
    ("3 single-vector intersection", check_single_vector_intersection),
    ("4 warm-up constant chain", check_warmup_chain),
    ("5 quantum chain", check_quantum_chain),
    ("6 tight instances", check_tight_instances),
    ("7 self-orthogonal sampler", check_sampler_soundness),
    ("8 ball-sum decay", check_ball_sum_decay),
    ("9 intersection concentration", check_intersection_concentration),
    ("10 Monte Carlo calibration", check_calibration),
]


def _run(fn):
    ok, detail = fn()
    assert ok, detail
    return detail


def test_bonferroni_bracketing():
    _run(check_bonferroni_bracketing)


def test_nh_closed_form():
    _run(check_nh_closed_form)


def test_single_vector_intersection():
    _run(check_single_vector_intersection)


def test_warmup_chain():
    _run(check_warmup_chain)


def test_quantum_chain():
    _run(check_quantum_chain)


def test_tight_instances():
    _run(check_tight_instances)


def test_sampler_soundness():
    _run(check_sampler_soundness)


def test_ball_sum_decay():
    _run(check_ball_sum_decay)


def test_intersection_concentration():
    _run(check_intersection_concentration)


def test_calibration():
    _run(check_calibration)


if __name__ == "__main__":
    for name, fn in CRITERIA:
        start = time.perf_counter()
        ok, detail = fn()
        print(f"{'PASS' if ok else 'FAIL'} [{name}] {detail} ({time.perf_counter() - start:.1f}s)")
