import math
import random

import pytest

from blockline.sets1d import ClosedSet1D, Interval, Lattice, Point

INF = math.inf


def dyadic(rng, lo, hi, bits=6):
    """Random multiple of 2**-bits in [lo, hi]; float sums of these stay exact."""
    k = rng.randint(int(lo * 2**bits), int(hi * 2**bits))
    return k / 2**bits


def random_dense_set(rng, span=12.0, bits=6):
    """A closed set meeting every closed unit interval, with dyadic data."""
    kind = rng.choice(["lattice", "points", "intervals", "mixed"])
    if kind == "lattice":
        period = dyadic(rng, 0.25, 1.0, bits) or 1.0
        return ClosedSet1D((Lattice(dyadic(rng, -1, 1, bits), period), Point(dyadic(rng, -span, span, bits))))
    parts = []
    x = -span
    parts.append(Interval(-INF, x))
    while x < span:
        step = dyadic(rng, 0.0, 1.0, bits)
        if kind == "intervals" or (kind == "mixed" and rng.random() < 0.3):
            width = dyadic(rng, 0.0, 0.5, bits)
            parts.append(Interval(x + step, x + step + width))
            x += step + width
        else:
            parts.append(Point(x + step))
            x += step
    parts.append(Interval(x, INF))
    rng.shuffle(parts)
    return ClosedSet1D(tuple(parts))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
