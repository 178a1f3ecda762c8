import itertools
import random

import pytest

from orthofq.ffield import field_for_order
from orthofq.geometry import PointSet


def naive_dot(f, u, v):
    acc = f.zero
    for x, y in zip(u.elements, v.elements):
        acc = acc + x * y
    return acc


def naive_lambda(E, k, distinct=False):
    """Unpruned enumeration of E^k, the reference count for small sets."""
    vs = list(E)
    f = E.field
    total = 0
    for tup in itertools.product(range(len(vs)), repeat=k):
        if distinct and (len(set(tup)) < k or any(vs[i].is_zero() for i in tup)):
            continue
        if all(naive_dot(f, vs[tup[a]], vs[tup[b]]) == f.zero for a in range(k) for b in range(a + 1, k)):
            total += 1
    return total


def random_set(rng, q, d, max_size, include_zero=None):
    f = field_for_order(q)
    n = q**d
    size = rng.randrange(0, min(max_size, n) + 1)
    pts = rng.sample(range(n), size)
    if include_zero is True and 0 not in pts:
        pts.append(0)
    if include_zero is False:
        pts = [p for p in pts if p]
    return PointSet(f, d, pts)


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
