import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gvkit.errors import DomainError, UsageError
from gvkit.field import (
    FieldElement,
    euclidean_dot,
    field,
    field_arithmetic,
    hamming_weight,
    vec_add,
    vec_scale,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9]


def test_spot_values():
    F2, F3, F5 = field(2), field(3), field(5)
    assert field_arithmetic(FieldElement(F2, 1), FieldElement(F2, 1), "add").value == 0
    assert field_arithmetic(FieldElement(F3, 2), None, "inv").value == 2
    assert field_arithmetic(FieldElement(F5, 3), FieldElement(F5, 4), "mul").value == 2


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = field(q)
    els = range(q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("q", ORDERS)
def test_characteristic_and_order(q):
    F = field(q)
    p = F.characteristic
    assert p**F.extension_degree == q
    for a in range(q):
        acc = 0
        for _ in range(p):
            acc = F.add(acc, a)
        assert acc == 0
    # the multiplicative group is cyclic of order q - 1
    orders = []
    for a in range(1, q):
        x, k = a, 1
        while x != 1:
            x, k = F.mul(x, a), k + 1
        orders.append(k)
    assert max(orders) == q - 1


@pytest.mark.parametrize("q", [4, 8, 9])
def test_extension_tables_are_group_isomorphism(q):
    F = field(q)
    for i in range(q - 1):
        for j in range(q - 1):
            assert F.mul(F.exp_table[i], F.exp_table[j]) == F.exp_table[(i + j) % (q - 1)]


def test_gf4_matches_polynomial_arithmetic():
    # independent oracle: multiply pairs of GF(2)[x] polynomials mod x^2 + x + 1
    def pmul(a, b):
        r = 0
        for i in range(2):
            if (b >> i) & 1:
                r ^= a << i
        if r & 4:
            r ^= 0b111
        return r

    F = field(4)
    for a in range(4):
        for b in range(4):
            assert F.mul(a, b) == pmul(a, b)
            assert F.add(a, b) == a ^ b


def test_errors():
    F3, F5 = field(3), field(5)
    with pytest.raises(DomainError):
        FieldElement(F3, 0).inverse()
    with pytest.raises(UsageError):
        FieldElement(F3, 1) + FieldElement(F5, 1)
    with pytest.raises(UsageError):
        FieldElement(F3, 3)
    with pytest.raises(UsageError):
        field(6)
    with pytest.raises(UsageError):
        field_arithmetic(FieldElement(F3, 1), None, "pow")


def test_vector_ops():
    F2, F3 = field(2), field(3)
    assert vec_add(F2, [1, 0, 1], [1, 1, 1]).tolist() == [0, 1, 0]
    assert vec_scale(F3, 2, [1, 2, 0]).tolist() == [2, 1, 0]
    assert euclidean_dot(F2, [1, 0, 1], [1, 1, 1]) == 0
    with pytest.raises(UsageError):
        vec_add(F2, [1, 0], [1, 0, 1])


def test_hamming_weight_examples():
    assert hamming_weight(np.zeros(3, dtype=int)) == 0
    assert hamming_weight([1, 2, 0]) == 2
    assert hamming_weight(np.ones(11, dtype=int)) == 11


@settings(max_examples=200, deadline=None)
@given(
    q=st.sampled_from(ORDERS),
    data=st.data(),
)
def test_weight_properties(q, data):
    F = field(q)
    n = data.draw(st.integers(1, 12))
    u = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n)))
    v = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n)))
    lam = data.draw(st.integers(1, q - 1))
    assert hamming_weight(vec_add(F, u, v)) <= hamming_weight(u) + hamming_weight(v)
    assert hamming_weight(vec_scale(F, lam, u)) == hamming_weight(u)


@pytest.mark.parametrize("q", ORDERS)
def test_matmul_matches_elementwise(q):
    F = field(q)
    rng = np.random.default_rng(q)
    A = rng.integers(0, q, (3, 4))
    B = rng.integers(0, q, (4, 5))
    C = F.matmul(A, B)
    for i in range(3):
        for j in range(5):
            acc = 0
            for t in range(4):
                acc = F.add(acc, F.mul(A[i, t], B[t, j]))
            assert C[i, j] == acc
