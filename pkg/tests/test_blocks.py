import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockline.blocks import BlockInstance, oracle_min_spread, partition, partition_scaled, prefix_sums
from blockline.errors import CapExceeded, ValidationError


def brute_min_spread(values, n):
    """Plain enumeration over boundaries, exact arithmetic on the prefix array."""
    m = len(values)
    prefix = [Fraction(a) for a in prefix_sums(BlockInstance(tuple(values), n))]
    best = None
    for inner in itertools.combinations_with_replacement(range(m + 1), n - 1):
        b = (0, *inner, m)
        sizes = [prefix[j] - prefix[i] for i, j in zip(b, b[1:])]
        sp = max(sizes) - min(sizes)
        best = sp if best is None or sp < best else best
    return best


def check_partition(values, n, part):
    assert part.boundaries[0] == 0 and part.boundaries[-1] == len(values)
    assert list(part.boundaries) == sorted(part.boundaries)
    assert len(part.sizes) == n
    assert all(b >= 0 for b in part.sizes)
    assert sum(part.blocks(values), []) == list(values)
    assert math.isclose(sum(part.sizes), math.fsum(values), abs_tol=1e-9)


def test_prefix_sums():
    assert prefix_sums(BlockInstance((1, 1, 1), 1)) == [0.0, 1.0, 2.0, 3.0]
    assert prefix_sums(BlockInstance((0.3, 0.9, 0.2, 0.8), 1)) == pytest.approx([0, 0.3, 1.2, 1.4, 2.2])
    assert prefix_sums(BlockInstance((), 3)) == [0.0]
    with pytest.raises(ValidationError):
        BlockInstance((0.5, 1.5), 2)
    with pytest.raises(ValidationError):
        BlockInstance((0.5,), 0)


def test_partition_examples():
    part = partition(BlockInstance((1, 1, 1), 2))
    assert sorted(part.sizes) == [1.0, 2.0] and part.spread == 1.0
    part = partition(BlockInstance((0.5, 0.5), 2))
    assert part.sizes == (0.5, 0.5) and part.spread == 0.0
    values = (0.3, 0.9, 0.2, 0.8)
    part = partition(BlockInstance(values, 3))
    check_partition(values, 3, part)
    assert part.spread <= 1


def test_oracle_examples():
    spread, part = oracle_min_spread(BlockInstance((0.3, 0.9, 0.2, 0.8), 3))
    assert spread == pytest.approx(0.7) and part.boundaries == (0, 1, 2, 4)
    assert oracle_min_spread(BlockInstance((1, 1, 1), 2))[0] == 1.0
    assert oracle_min_spread(BlockInstance((0.2, 0.7, 0.1), 1))[0] == 0.0
    with pytest.raises(CapExceeded):
        oracle_min_spread(BlockInstance((0.5,) * 30, 10), cap=1000)


def test_oracle_matches_plain_enumeration(rng):
    for _ in range(100):
        m, n = rng.randint(0, 8), rng.randint(1, 4)
        values = tuple(rng.random() for _ in range(m))
        spread, _ = oracle_min_spread(BlockInstance(values, n))
        assert spread == float(brute_min_spread(values, n))


def test_random_instances_against_oracle(rng):
    for _ in range(300):
        m, n = rng.randint(0, 20), rng.randint(1, 6)
        values = tuple(rng.random() for _ in range(m))
        inst = BlockInstance(values, n)
        part = partition(inst)
        check_partition(values, n, part)
        prefix = [Fraction(a) for a in prefix_sums(inst)]
        exact = [prefix[b] - prefix[a] for a, b in zip(part.boundaries, part.boundaries[1:])]
        assert max(exact) - min(exact) <= 1
        assert oracle_min_spread(inst)[0] <= part.spread


def test_zeros_and_more_blocks_than_values():
    part = partition(BlockInstance((0.0, 0.0, 1.0, 0.0), 3))
    check_partition((0.0, 0.0, 1.0, 0.0), 3, part)
    part = partition(BlockInstance((0.4, 0.6), 5))
    assert part.spread <= 1 and part.sizes.count(0.0) >= 3


@pytest.mark.parametrize("m, n", [(6, 3), (12, 4), (7, 3), (5, 2), (10, 4)])
def test_all_equal_inputs(m, n):
    part = partition(BlockInstance((1.0,) * m, n))
    assert part.spread == (0.0 if m % n == 0 else 1.0)
    assert partition(BlockInstance((0.25,) * (4 * n), n)).spread == 0.0


def test_partition_scaled():
    part, scale = partition_scaled([3, 5, 2, 7, 1], 3)
    assert scale == 7
    assert part.spread <= 7
    assert sum(part.sizes) == 18


@settings(max_examples=150, deadline=None)
@given(st.lists(st.floats(0, 1), max_size=14), st.integers(1, 5))
def test_spread_at_most_one(values, n):
    part = partition(BlockInstance(tuple(values), n))
    check_partition(values, n, part)
    assert part.spread <= 1
