import itertools
import math
from fractions import Fraction

import pytest

from gvkit.combinatorics import (
    hamming_volume,
    hyperplane_pair_count,
    q_ary_entropy,
    single_vector_intersection_formula,
    symplectic_volume,
    volume_entropy_check,
    weight_class_sizes,
)
from gvkit.errors import DomainError, UsageError


def brute_hamming_volume(q, n, d):
    return sum(1 for v in itertools.product(range(q), repeat=n) if sum(x != 0 for x in v) <= d)


def brute_symplectic_volume(q, n, d):
    count = 0
    for v in itertools.product(range(q), repeat=2 * n):
        if sum(1 for j in range(n) if v[j] or v[n + j]) <= d:
            count += 1
    return count


def test_hamming_volume_examples():
    assert hamming_volume(2, 4, 1) == 5
    assert hamming_volume(2, 9, 9) == 2**9
    assert hamming_volume(3, 4, 2) == brute_hamming_volume(3, 4, 2) == 33


@pytest.mark.parametrize("q,n", [(2, 5), (3, 4), (4, 3), (5, 3)])
def test_hamming_volume_enumeration(q, n):
    for d in range(n + 1):
        assert hamming_volume(q, n, d) == brute_hamming_volume(q, n, d)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (2, 4)])
def test_symplectic_volume_enumeration(q, n):
    for d in range(n + 1):
        assert symplectic_volume(q, n, d) == brute_symplectic_volume(q, n, d)
    assert symplectic_volume(q, n, 0) == 1
    assert symplectic_volume(q, n, n) == q ** (2 * n)


def test_symplectic_volume_example():
    assert symplectic_volume(2, 3, 1) == 10


def test_radius_out_of_range():
    with pytest.raises(UsageError):
        hamming_volume(2, 4, 5)
    with pytest.raises(UsageError):
        symplectic_volume(2, 4, -1)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_volume_strictly_increasing(q):
    n = 12
    vols = [hamming_volume(q, n, d) for d in range(n + 1)]
    assert all(a < b for a, b in zip(vols, vols[1:]))
    assert vols[-1] == q**n


@pytest.mark.parametrize("q,n", [(2, 7), (3, 5), (5, 9)])
def test_weight_classes_partition_space(q, n):
    assert sum(weight_class_sizes(q * q, n)) == q ** (2 * n)


def test_entropy_examples():
    assert q_ary_entropy(2, Fraction(1, 2)).value == 1
    for q in (2, 3, 4, 7):
        assert q_ary_entropy(q, 1 - Fraction(1, q)).value == 1
    assert q_ary_entropy(2, 0).value == 0
    # interior value against a direct float evaluation
    x = 0.11
    ref = -x * math.log2(x) - (1 - x) * math.log2(1 - x)
    assert abs(float(q_ary_entropy(2, "0.11")) - ref) < 1e-12
    with pytest.raises(DomainError):
        q_ary_entropy(2, Fraction(3, 5))
    with pytest.raises(DomainError):
        q_ary_entropy(3, -1)


def test_entropy_precision():
    hi = q_ary_entropy(3, Fraction(1, 3), precision=200).value
    lo = q_ary_entropy(3, Fraction(1, 3), precision=53).value
    assert abs(hi - lo) < 2.0**-50


@pytest.mark.parametrize("q", [2, 3, 4])
def test_volume_below_entropy_exponential(q):
    top = 1 - Fraction(1, q)
    ps = [Fraction(i, 10) for i in range(1, 10) if Fraction(i, 10) <= top] + [top]
    checked = 0
    for p in ps:
        for n in range(1, 65):
            if (p * n).denominator != 1:
                continue
            res = volume_entropy_check(q, n, p)
            assert res.holds is True, (q, n, p)
            assert res.rate_ratio <= 1 + 1e-12
            checked += 1
    assert checked > 50


def test_volume_entropy_symplectic():
    for n in (10, 20, 40):
        assert volume_entropy_check(2, n, Fraction(1, 2), symplectic=True).holds


def brute_nh(q, h, coeffs):
    count = 0
    pairs = [(x, y) for x in range(q) for y in range(q) if (x, y) != (0, 0)]
    for assignment in itertools.product(pairs, repeat=h):
        s = sum(a * y - b * x for (a, b), (x, y) in zip(coeffs, assignment)) % q
        count += s == 0
    return count


def test_nh_spot_values():
    assert hyperplane_pair_count(2, 0) == 1
    assert hyperplane_pair_count(2, 1) == 1
    assert hyperplane_pair_count(2, 2) == 5
    assert brute_nh(2, 1, [(1, 1)]) == 1
    assert brute_nh(2, 2, [(1, 1), (1, 1)]) == 5


@pytest.mark.parametrize("q", [2, 3])
def test_nh_fixed_pattern(q):
    for h in range(4):
        assert hyperplane_pair_count(q, h) == brute_nh(q, h, [(1, 1)] * h)


def test_single_vector_formula_whole_space():
    # every nonzero u cuts the whole space in a hyperplane
    for q, n in [(2, 3), (3, 2)]:
        for t in range(1, n + 1):
            assert single_vector_intersection_formula(q, n, n, t) == q ** (2 * n - 1)
