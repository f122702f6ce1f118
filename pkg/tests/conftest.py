import itertools
import math
import random

import pytest

from distbounds import CoordinateSpec, DiffLevel, IntervalLevel

ACCEPTANCE_RESULTS = []


def record(criterion, ok, detail=""):
    ACCEPTANCE_RESULTS.append((criterion, bool(ok), detail))
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion} {detail}".rstrip()
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {criterion} {detail}".rstrip())


def oracle_cell_sum(spec, t):
    """Direct sum over every cell of P(cell) * exp(-2 t^2 / weight_sum)."""
    terms = []
    for cell in itertools.product(*spec.coordinates):
        p = math.prod(lv.prob for lv in cell)
        w = sum(lv.weight for lv in cell)
        if w == 0:
            e = 1.0 if t == 0 else 0.0
        else:
            e = math.exp(-2 * t * t / w)
        terms.append(p * e)
    return math.fsum(terms)


def _probs(rng, k):
    raw = [rng.random() + 0.05 for _ in range(k)]
    s = sum(raw)
    p = [x / s for x in raw]
    p[-1] = 1.0 - math.fsum(p[:-1])
    return p


def random_levels(rng, kind, k):
    p = _probs(rng, k)
    if kind == "interval":
        out = []
        for pj in p:
            a = rng.uniform(-3, 3)
            out.append(IntervalLevel((a, a + rng.uniform(0.05, 4)), pj))
        return out
    return [DiffLevel(rng.uniform(0.05, 4), pj) for pj in p]


def random_spec(rng, kind, iid=None, max_n=6, max_k=3):
    n = rng.randint(1, max_n)
    if iid is None:
        iid = rng.random() < 0.5
    if iid:
        return CoordinateSpec.iid(random_levels(rng, kind, rng.randint(1, max_k)), n)
    return CoordinateSpec.from_levels([random_levels(rng, kind, rng.randint(1, max_k)) for _ in range(n)])


@pytest.fixture
def rng():
    return random.Random(1234)
