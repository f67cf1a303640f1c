import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockline.errors import BracketFailure, DensityViolation, EndpointViolation, Infeasible, ValidationError
from blockline.sets1d import ClosedSet1D, Interval, Point
from blockline.transversal1d import (
    GridSequence1D,
    exact_spread,
    extract,
    find_window_offset,
    propagate,
    solve,
    solve_exact_finite,
)

from conftest import dyadic, random_dense_set

Z = ClosedSet1D.lattice(0.0, 1.0)
LINE = ClosedSet1D.real_line()


def seq_of(interior, s, dense=True):
    return GridSequence1D.from_interior(interior, s, dense)


def random_dense_seq(rng, n_max=8):
    n = rng.randint(2, n_max)
    s = dyadic(rng, -6, 6)
    return seq_of([random_dense_set(rng) for _ in range(n - 1)], s)


def test_endpoint_and_density_checks():
    with pytest.raises(EndpointViolation):
        GridSequence1D((ClosedSet1D.point(1.0), Z, ClosedSet1D.point(1.0)), 1.0)
    with pytest.raises(EndpointViolation):
        GridSequence1D((ClosedSet1D.point(0.0), Z, ClosedSet1D.point(2.0)), 1.0)
    with pytest.raises(DensityViolation):
        seq_of([ClosedSet1D.lattice(0, 2)], 1.0)
    seq_of([ClosedSet1D.lattice(0, 2)], 1.0, dense=False)


def test_propagate_examples():
    st0 = propagate(seq_of([Z], 1.0), 0.0)
    assert (st0.L[1:], st0.R[1:]) == ((0.0, 0.0), (1.0, 2.0))
    st1 = propagate(seq_of([Z], 1.0), -1.0)
    assert (st1.L[2], st1.R[2]) == (-2.0, 0.0)
    st2 = propagate(seq_of([ClosedSet1D.points([0, 1, 2, 3])], 3.0, dense=False), 1.0)
    assert (st2.L[2], st2.R[2]) == (2.0, 4.0)
    with pytest.raises(ValidationError):
        propagate(seq_of([Z], 1.0), 1.0, 0.0)


def test_propagate_flags_in_block_mode():
    seq = seq_of([ClosedSet1D.points([0, 1])], 1.0, dense=False)
    assert propagate(seq, 5.0).infeasible_low_from == 2
    assert propagate(seq, -5.0).infeasible_high_from == 2
    assert propagate(seq, 5.0).compare(1.0) == "high"
    assert propagate(seq, -5.0).compare(1.0) == "low"
    gap = seq_of([ClosedSet1D.points([0, 3])], 3.0, dense=False)
    assert propagate(gap, 1.0).empty_from == 2


def test_find_window_offset_examples():
    seq = seq_of([Z], 1.0)
    x_lo, x_hi, exact = find_window_offset(seq, 1.0, 2)
    assert exact and x_lo == x_hi and -1.0 <= x_lo <= 0.0
    st0 = propagate(seq, x_lo)
    assert st0.L[2] <= 1.0 <= st0.R[2]
    full = seq_of([LINE] * 4, 7.0)
    x_lo, x_hi, exact = find_window_offset(full, 3.3, 3)
    assert exact
    st1 = propagate(full, x_lo)
    assert st1.L[3] == pytest.approx(3 * x_lo) and st1.R[3] == pytest.approx(3 * (x_lo + 1))


def test_find_window_offset_rejects_bad_args():
    seq = seq_of([Z], 1.0)
    with pytest.raises(ValidationError):
        find_window_offset(seq, 0.0, 3)
    with pytest.raises(ValidationError):
        find_window_offset(seq, 0.0, 2, eps=0.0)


def test_bracket_failure_on_malformed_input():
    # a bounded set in dense mode cannot occur, so force it through block mode
    seq = seq_of([ClosedSet1D.points([0.0])], 0.0, dense=False)
    with pytest.raises((BracketFailure, ValidationError)):
        find_window_offset(seq, 1e300, 2)


def test_extract_examples():
    pts = ClosedSet1D.points([0, 1, 2, 3])
    seq = seq_of([pts], 3.0, dense=False)
    t = extract(seq, propagate(seq, 1.0))
    assert t.points in ((0.0, 1.0, 3.0), (0.0, 2.0, 3.0))
    assert t.spread == 1.0
    seq = seq_of([Z], 1.0)
    t = extract(seq, propagate(seq, 0.0))
    assert t.points in ((0.0, 0.0, 1.0), (0.0, 1.0, 1.0)) and t.spread == 1.0
    seq = seq_of([LINE] * 2, 0.0)
    t = extract(seq, propagate(seq, 0.0))
    assert t.points == (0.0, 0.0, 0.0, 0.0) and t.spread == 0.0


def test_solve_examples():
    t = solve(seq_of([Z], 1.0))
    assert t.spread == 1.0
    t = solve(seq_of([LINE] * 4, 2.5))
    assert t.spread == pytest.approx(0.0, abs=1e-12)
    assert all(z == pytest.approx(0.5) for z in t.z)
    seq = seq_of([ClosedSet1D.lattice(0.5, 1.0)] * 2, 0.0)
    t = solve(seq)
    t.check(seq)
    assert t.spread <= 1.0 + 1e-9
    # brute force over lattice picks in [-3, 3]
    picks = [k + 0.5 for k in range(-3, 3)]
    best = min(exact_spread((0.0, a, b, 0.0)) for a in picks for b in picks)
    assert best == 1


def test_solve_exact_finite_examples():
    seq = seq_of([ClosedSet1D.points([0, 1, 2, 3])], 3.0, dense=False)
    t = solve_exact_finite(seq)
    assert t.spread == 1.0
    seq = seq_of([ClosedSet1D.points([0, 0.5, 1])], 1.0, dense=False)
    t = solve_exact_finite(seq)
    assert t.points == (0.0, 0.5, 1.0) and t.spread == 0.0
    assert t.offset_window == (0.5, 0.5)


def test_solve_exact_finite_rejects_and_infeasible():
    with pytest.raises(ValidationError):
        solve_exact_finite(seq_of([Z], 1.0))
    with pytest.raises(Infeasible):
        solve_exact_finite(seq_of([ClosedSet1D.points([10.0])], 0.0, dense=False))


def brute_min_spread(values, s):
    best = None
    for combo in itertools.product(*values):
        sp = exact_spread((0.0, *combo, s))
        best = sp if best is None or sp < best else best
    return best


def test_solve_exact_finite_against_brute_force(rng):
    for _ in range(300):
        n = rng.randint(2, 5)
        s = dyadic(rng, -3, 3, 3)
        interior = []
        for _ in range(n - 1):
            k = rng.randint(1, 5)
            interior.append(sorted({dyadic(rng, -4, 4, 3) for _ in range(k)}))
        seq = seq_of([ClosedSet1D.points(v) for v in interior], s, dense=False)
        best = brute_min_spread(interior, s)
        try:
            t = solve_exact_finite(seq)
        except Infeasible:
            assert best > 1
            continue
        t.check(seq)
        assert exact_spread(t.points) <= 1
        assert exact_spread(t.points) >= best


def test_monotone_and_wide_windows(rng):
    for _ in range(300):
        seq = random_dense_seq(rng)
        xs = sorted(dyadic(rng, -4, 4) for _ in range(4))
        states = [propagate(seq, x) for x in xs]
        for a, b in zip(states, states[1:]):
            for i in range(1, seq.n + 1):
                assert a.L[i] <= b.L[i] and a.R[i] <= b.R[i]
        for st_ in states:
            assert all(st_.R[i] - st_.L[i] >= 1 for i in range(1, seq.n + 1))


def test_relaxed_window_sandwich(rng):
    for _ in range(200):
        seq = random_dense_seq(rng)
        x_lo = dyadic(rng, -3, 3)
        x_hi = x_lo + dyadic(rng, 0, 0.5)
        relaxed = propagate(seq, x_lo, x_hi)
        for x in (x_lo, (x_lo + x_hi) / 2, x_hi):
            single = propagate(seq, x)
            for i in range(1, seq.n + 1):
                assert relaxed.L[i] <= single.L[i] <= single.R[i] <= relaxed.R[i]


def test_covering_and_solver_on_random_sequences(rng):
    for _ in range(200):
        seq = random_dense_seq(rng)
        h = rng.randint(1, seq.n)
        p = rng.uniform(-10, 10)
        x_lo, x_hi, exact = find_window_offset(seq, p, h)
        assert x_hi - x_lo <= 1e-9
        st_ = propagate(seq, x_lo, x_hi)
        assert st_.L[h] <= p <= st_.R[h]
        t = solve(seq, 1e-9)
        t.check(seq)
        assert t.points[0] == 0.0 and t.points[-1] == seq.s
        assert t.spread <= 1 + 1e-9


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.integers(0, 8), min_size=1, max_size=8),
    st.integers(-40, 40),
    st.integers(2, 6),
)
def test_solve_spread_property(gaps, s_num, n):
    # interior sets: points with gaps <= 1 between two halflines
    values = list(itertools.accumulate([g / 8 for g in gaps], initial=-3.0))
    parts = [Interval(-math.inf, values[0]), *(Point(v) for v in values), Interval(values[-1], math.inf)]
    A = ClosedSet1D(tuple(parts))
    seq = seq_of([A] * (n - 1), s_num / 8)
    t = solve(seq)
    t.check(seq)
    assert t.spread <= 1 + 1e-9
