"""One pass/fail line per acceptance criterion, printed in the terminal summary."""

import math
import random
import subprocess
import sys
import time

import mpmath
import numpy as np

from conftest import random_levels, random_spec, record
from distbounds import (
    BruteForce,
    Convolution,
    CoordinateSpec,
    Interval,
    combes_bound,
    corollary1_bound,
    corollary2_bound,
    hoeffding_bound,
    mcdiarmid_bound,
    theorem1_bound,
    theorem2_bound,
    worst_case_envelope,
)
from distbounds.montecarlo import (
    FiniteDistribution,
    clopper_pearson,
    conditional_mean_coordinate,
    estimate_tail,
    example1_partial_expectation,
    example2_stats,
    piecewise_conditional_mean,
    verify,
)
from distbounds.scenarios import (
    EXAMPLE4_MASSES,
    EXAMPLE4_RANGES,
    ScenarioSpec,
    example3_bounds,
    example4_bounds,
    find_crossing,
    find_min,
    scenario_bound,
    sweep,
)

T_GRID = (0.0, 0.05, 0.3, 1.0, 2.5, 6.0)


def rel_err(a, b):
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def test_01_oracle_equivalence():
    rng = random.Random(101)
    start = time.perf_counter()
    worst = 0.0
    for i in range(200):
        kind = "interval" if i % 2 else "diff"
        spec = random_spec(rng, kind, max_n=6, max_k=3)
        fn = theorem1_bound if kind == "interval" else theorem2_bound
        t = rng.uniform(0, 4)
        ref = fn(spec, t, method=BruteForce()).raw
        vals = [fn(spec, t, method=Convolution(0.0)).raw]
        if spec.iid_flag:
            vals.append(fn(spec, t, method="iid").raw)
        worst = max([worst] + [rel_err(v, ref) for v in vals])
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5
    record("C1 oracle equivalence", ok, f"max rel err {worst:.2e}, {elapsed:.2f} s")
    assert ok


def test_02_reduction_identities():
    rng = random.Random(202)
    worst = 0.0
    for _ in range(200):
        n = rng.randint(1, 12)
        t = rng.uniform(0, 5)
        ivs = [Interval(a, a + rng.uniform(0.01, 3)) for a in (rng.uniform(-2, 2) for _ in range(n))]
        cs = [rng.uniform(0.01, 3) for _ in range(n)]
        for two_sided in (True, False):
            pairs = [
                (corollary1_bound(ivs, 1.0, t, two_sided).raw, hoeffding_bound(ivs, t, two_sided).raw),
                (corollary2_bound(cs, 1.0, t, two_sided).raw, mcdiarmid_bound(cs, t, two_sided).raw),
                (combes_bound(cs, 0.0, t, two_sided).raw, mcdiarmid_bound(cs, t, two_sided).raw),
            ]
            worst = max([worst] + [rel_err(a, b) for a, b in pairs])
        # k = 1 on every coordinate: the theorems collapse to the classical bounds
        ispec = CoordinateSpec.from_levels([[lv] for lv in (random_levels(rng, "interval", 1)[0] for _ in range(n))])
        dspec = CoordinateSpec.from_levels([[lv] for lv in (random_levels(rng, "diff", 1)[0] for _ in range(n))])
        for method in (BruteForce(), Convolution(0.0)):
            worst = max(
                worst,
                rel_err(theorem1_bound(ispec, t, method).raw, hoeffding_bound(worst_case_envelope(ispec), t).raw),
                rel_err(theorem2_bound(dspec, t, method).raw, mcdiarmid_bound(worst_case_envelope(dspec), t).raw),
            )
    ok = worst <= 1e-15
    record("C2 reduction identities", ok, f"max rel err {worst:.2e}")
    assert ok


def test_03_ordering():
    rng = random.Random(303)
    worst = -math.inf
    for i in range(200):
        kind = "interval" if i % 2 else "diff"
        spec = random_spec(rng, kind, max_n=6, max_k=3)
        env = worst_case_envelope(spec)
        for t in T_GRID:
            if kind == "interval":
                thm, cls = theorem1_bound(spec, t).raw, hoeffding_bound(env, t).raw
            else:
                thm, cls = theorem2_bound(spec, t).raw, mcdiarmid_bound(env, t).raw
            worst = max(worst, thm - cls)
    ok = worst <= 1e-12
    record("C3 theorem <= classical envelope", ok, f"max excess {worst:.2e}")
    assert ok


def test_04_example3_curves():
    combes, cor1 = example3_bounds(10, 0.5)
    close = abs(cor1 - 0.287202) <= 1e-4 and abs(combes - 0.290288) <= 1e-4
    ordered = all(c <= b for b, c in (example3_bounds(n, 0.5) for n in range(1, 201)))
    ok = close and ordered
    record("C4 example 3 values and ordering", ok, f"cor1 {cor1:.6f}, combes {combes:.6f}")
    assert ok


def _envelope_gap_mp(n, t=25):
    """``envelope - mcdiarmid`` in 60-digit arithmetic."""
    with mpmath.workdps(60):
        n = mpmath.mpf(n)
        q = [mpmath.mpf(0)]
        for m in EXAMPLE4_MASSES:
            q.append(q[-1] + mpmath.mpf(m))
        q[-1] = mpmath.mpf(1)
        e = [mpmath.exp(-2 * t ** 2 * n / mpmath.mpf(r) ** 2) for r in EXAMPLE4_RANGES]
        env = mpmath.fsum((q[j + 1] ** n - q[j] ** n) * e[j] for j in range(3))
        return env - e[-1]


def test_05_example4_chain():
    ns = (10, 50, 100, 500, 1000, 5000)
    start = time.perf_counter()
    rows = [example4_bounds(n, 25) for n in ns]
    elapsed = time.perf_counter() - start
    chain = all(full <= env <= mcd for mcd, env, full in rows)
    float_gaps = [env - mcd for mcd, env, _ in rows]
    exact_gaps = [_envelope_gap_mp(n) for n in ns]
    negative = all(g <= 0 for g in float_gaps) and all(g < 0 for g in exact_gaps)
    shrinking = all(abs(a) > abs(b) for a, b in zip(exact_gaps, exact_gaps[1:]))
    ok = chain and negative and shrinking and elapsed < 10
    detail = f"gap n=10 {float(exact_gaps[0]):.3e}, n=5000 {float(exact_gaps[-1]):.3e}, {elapsed:.2f} s"
    record("C5 example 4 chain and shrinking gap", ok, detail)
    assert ok


def test_06_example5_minimum():
    series = sweep(ScenarioSpec("example5", 100, t=3.0), 100, 5000, 10)[0]
    n, v = find_min(series)
    ok = 1400 <= n <= 1800
    record("C6 example 5 minimum", ok, f"argmin n={n}, value {v:.6f}")
    assert ok


def test_07_example6_crossing():
    series = sweep(ScenarioSpec("example6", 100, t=50.0), 100, 10000, 25)[0]
    n = find_crossing(series, 0.5)
    vals = series.values
    last = dict(series.points)[10000]
    tail = [v for m, v in series.points if m >= n]
    monotone = all(a < b for a, b in zip(tail, tail[1:]))
    crossing = n is not None and 4000 <= n <= 4700
    ok = crossing and last > 0.9 and monotone and vals[-1] < 1
    detail = (f"crosses 0.5 at n={n} ({'ok' if crossing else 'out of range'}), "
              f"value(10000) {last:.6f} ({'ok' if last > 0.9 else 'not > 0.9'}), "
              f"tail monotone {monotone}")
    record("C7 example 6 crossing and tail", ok, detail)
    assert ok


def test_08_monte_carlo_soundness():
    start = time.perf_counter()
    statuses, same = [], True
    for kind, n, t in (("example3", 10, 0.5), ("example4", 100, 25.0)):
        spec = ScenarioSpec(kind, n, t=t)
        bound = scenario_bound(spec)
        ests = [estimate_tail(spec, N=100_000, seed=20240229, alpha=0.001, workers=w) for w in (1, 2, 8)]
        same &= len({e.hits for e in ests}) == 1
        statuses.append((kind, verify(bound, ests[0]).status, ests[0].hits))
    elapsed = time.perf_counter() - start
    ok = same and all(s != "Violation" for _, s, _ in statuses) and elapsed < 30
    detail = ", ".join(f"{k} {s} ({h} hits)" for k, s, h in statuses) + f", {elapsed:.1f} s"
    record("C8 Monte Carlo soundness", ok, detail)
    assert ok


def _random_finite(rng):
    k = rng.randint(2, 8)
    values = np.sort(rng.sample(range(-50, 50), k)).astype(float) + rng.random()
    raw = [rng.random() + 0.01 for _ in range(k)]
    s = math.fsum(raw)
    probs = [x / s for x in raw]
    probs[-1] = 1.0 - math.fsum(probs[:-1])
    return FiniteDistribution(values, np.array(probs))


def _random_partition(rng, dist):
    """Consecutive blocks of the support, as closed intervals."""
    k = dist.values.size
    cuts = sorted(rng.sample(range(1, k), rng.randint(0, min(2, k - 1))))
    bounds = [0] + cuts + [k]
    return [Interval(dist.values[a], dist.values[b - 1]) for a, b in zip(bounds, bounds[1:])]


def test_09_total_expectation():
    rng = random.Random(909)
    worst = 0.0
    for _ in range(50):
        n = rng.randint(1, 4)
        dists = [_random_finite(rng) for _ in range(n)]
        parts = [_random_partition(rng, d) for d in dists]
        terms = []
        for cell in np.ndindex(*(len(p) for p in parts)):
            mass = math.prod(d.mass(p[j]) for d, p, j in zip(dists, parts, cell))
            terms.append(mass * piecewise_conditional_mean(dists, parts, cell))
        total = math.fsum(terms)
        expect = math.fsum(d.mean for d in dists)
        worst = max(worst, abs(total - expect) / max(1.0, abs(expect)))
        # the coordinate-level identity as well
        for d, p in zip(dists, parts):
            one = math.fsum(d.mass(iv) * conditional_mean_coordinate(d, iv) for iv in p)
            worst = max(worst, abs(one - d.mean) / max(1.0, abs(d.mean)))
    ok = worst <= 1e-12
    record("C9 law of total expectation", ok, f"max err {worst:.2e}")
    assert ok


def test_10_motivating_examples():
    diff = example1_partial_expectation(1, 10 ** 6) - example1_partial_expectation(1, 10 ** 3)
    target = 6 / math.pi ** 2 * math.log(1000)
    ex1 = abs(diff - target) <= 0.01 * target
    ex2 = all(
        example2_stats(M, n) == (M ** -n, 1.0) for M, n in ((2, 1), (2, 10), (3, 4), (7, 9), (10, 20))
    )
    ok = ex1 and ex2
    record("C10 motivating examples", ok, f"ex1 diff {diff:.5f} vs {target:.5f}")
    assert ok


def test_11_cli_determinism(tmp_path):
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "distbounds", *args], capture_output=True, text=True)

    identical = True
    for panel in ("3", "4", "5", "6"):
        a, b = tmp_path / f"{panel}a.csv", tmp_path / f"{panel}b.csv"
        codes = [cli("repro", panel, "--out", str(p)).returncode for p in (a, b)]
        identical &= codes == [0, 0] and a.read_bytes() == b.read_bytes()
    bad = tmp_path / "bad.json"
    exits = []
    for doc in ('{"diffs": [{"c": "x"}]}', '{"intervals": [{"a": 0}]}', '{"diffs": [{"c": 1}], "bogus": 1}', "[]"):
        bad.write_text(doc)
        exits.append(cli("bound", "mcdiarmid", "--config", str(bad), "--t", "1").returncode)
    ok = identical and all(e == 2 for e in exits)
    record("C11 CLI determinism and schema errors", ok, f"schema exits {exits}")
    assert ok


def test_cp_interval_used_by_verdicts_is_exact():
    # sanity check of the interval the Monte Carlo verdicts rely on
    lo, hi = clopper_pearson(0, 100, 0.05)
    assert lo == 0.0 and abs(hi - (1 - 0.025 ** 0.01)) < 1e-11
