import numpy as np

from gvkit.rng import default_seed, generator, uniform_below


def test_same_triple_same_stream():
    a = generator(5, "x", 3).integers(0, 1 << 30, 16)
    b = generator(5, "x", 3).integers(0, 1 << 30, 16)
    assert np.array_equal(a, b)


def test_different_keys_differ():
    base = generator(5, "x", 3).integers(0, 1 << 30, 16)
    for other in (generator(6, "x", 3), generator(5, "y", 3), generator(5, "x", 4)):
        assert not np.array_equal(base, other.integers(0, 1 << 30, 16))


def test_default_seed_env(monkeypatch):
    monkeypatch.setenv("GVKIT_SEED", "42")
    assert default_seed() == 42
    monkeypatch.delenv("GVKIT_SEED")
    assert default_seed() == 0


def test_uniform_below_big_bound():
    bound = 3 * (1 << 100) + 7
    rng = generator(1, "big")
    xs = uniform_below(rng, bound, 4000)
    assert all(0 <= x < bound for x in xs)
    # each third of the range should get about a third of the draws
    thirds = [sum(1 for x in xs if i * bound // 3 <= x < (i + 1) * bound // 3) for i in range(3)]
    assert all(abs(t - 4000 / 3) < 5 * (4000 * 2 / 9) ** 0.5 for t in thirds)
