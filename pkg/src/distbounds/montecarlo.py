"""Seeded Monte Carlo checks of the tail bounds.

Randomness comes from numpy's PCG64 generator.  A run with seed ``s`` is cut
into fixed-size chunks and chunk ``c`` draws from
``PCG64(SeedSequence(s, spawn_key=(c,)))``, so hit counts depend only on
``(seed, scenario, t, trials)`` and never on how many workers process the
chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import betainc

from .bounds import ONE_SIDED, TWO_SIDED, BoundReport
from .coords import Interval
from .errors import DomainError, InputError
from .scenarios import EXAMPLE4_RANGES, ScenarioSpec, example6_phi

# stand-in for the infinite support point of example 5
INFINITY_PROXY = 1e9

CHUNK_ELEMENTS = 2 ** 21
MAX_CHUNK_TRIALS = 10_000


@dataclass(frozen=True)
class FiniteDistribution:
    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        if values.ndim != 1 or values.shape != probs.shape or values.size == 0:
            raise InputError("values and probs must be equal-length nonempty vectors")
        if not np.all(np.isfinite(values)):
            raise InputError("values must be finite")
        if np.any(np.diff(values) <= 0):
            raise InputError("values must be strictly increasing")
        if np.any(probs < 0) or abs(math.fsum(probs.tolist()) - 1.0) > 1e-12:
            raise InputError("probs must be nonnegative and sum to 1")
        cum = np.cumsum(probs)
        cum[-1] = 1.0
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def uniform(cls, values) -> "FiniteDistribution":
        values = np.asarray(values, dtype=float)
        return cls(values, np.full(values.size, 1.0 / values.size))

    @property
    def mean(self) -> float:
        return math.fsum((self.values * self.probs).tolist())

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-CDF draws: binary search of a uniform in the cumulative sums."""
        u = rng.random(size)
        idx = np.searchsorted(self._cum, u, side="right")
        # guard against u landing on the final cumulative value through rounding
        idx = np.minimum(idx, self.values.size - 1)
        return self.values[idx]

    def mass(self, interval: Interval) -> float:
        inside = (self.values >= interval.lower) & (self.values <= interval.upper)
        return math.fsum(self.probs[inside].tolist())


@dataclass(frozen=True)
class SeedSpec:
    seed: int

    def substream(self, index: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(self.seed), spawn_key=(int(index),))))


@dataclass(frozen=True)
class TailEstimate:
    trials: int
    hits: int
    point: float
    ci_low: float
    ci_high: float
    confidence: float
    sided: str


@dataclass(frozen=True)
class Verdict:
    status: str  # "Consistent" | "Violation" | "Inconclusive"
    bound: float


def sample_finite(dist: FiniteDistribution, rng: np.random.Generator) -> float:
    return float(dist.sample(rng))


def sample_cauchy(rng: np.random.Generator, size=None):
    """Standard Cauchy draws ``tan(pi (u - 1/2))`` with ``u`` strictly inside (0, 1)."""
    u = np.asarray(rng.random(size))
    bad = u == 0.0
    while np.any(bad):
        u[bad] = rng.random(int(bad.sum()))
        bad = u == 0.0
    out = np.tan(np.pi * (u - 0.5))
    return float(out) if size is None else out


def conditional_mean_coordinate(dist: FiniteDistribution, interval: Interval) -> float:
    inside = (dist.values >= interval.lower) & (dist.values <= interval.upper)
    mass = math.fsum(dist.probs[inside].tolist())
    if mass <= 0:
        raise DomainError(f"interval [{interval.lower}, {interval.upper}] has zero mass")
    return math.fsum((dist.values[inside] * dist.probs[inside]).tolist()) / mass


def piecewise_conditional_mean(
    dists: Sequence[FiniteDistribution],
    intervals: Sequence[Sequence[Interval]],
    cell: Sequence[int],
) -> float:
    """Conditional mean of ``sum X_i`` on a product cell.

    ``intervals[i][j]`` is level ``j`` of coordinate ``i``; ``cell`` picks one
    level per coordinate (0-based).  Independence makes the cell mean the sum
    of the coordinate conditional means.
    """
    if not (len(dists) == len(intervals) == len(cell)):
        raise InputError("dists, intervals and cell must have one entry per coordinate")
    return math.fsum(
        conditional_mean_coordinate(d, ivs[j]) for d, ivs, j in zip(dists, intervals, cell)
    )


# --- binomial confidence intervals -------------------------------------------

def _bisect(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of increasing ``f`` on ``[lo, hi]``."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clopper_pearson(m: int, N: int, alpha: float = 0.05) -> tuple[float, float]:
    """Exact two-sided binomial interval for ``m`` successes in ``N`` trials."""
    if not (0 <= m <= N) or N < 1:
        raise InputError(f"need 0 <= m <= N and N >= 1, got m={m}, N={N}")
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    # P(Bin(N, p) >= m) = I_p(m, N - m + 1) increases in p
    low = 0.0 if m == 0 else _bisect(lambda p: betainc(m, N - m + 1, p) - alpha / 2, 0.0, 1.0)
    high = 1.0 if m == N else _bisect(lambda p: betainc(m + 1, N - m, p) - (1 - alpha / 2), 0.0, 1.0)
    point = m / N
    return min(low, point), max(high, point)


def verify(bound: BoundReport, estimate: TailEstimate) -> Verdict:
    if bound.sided != estimate.sided:
        raise InputError(f"bound is {bound.sided} but the estimate is {estimate.sided}")
    b = bound.clamped
    if estimate.ci_low > b:
        return Verdict("Violation", b)
    if estimate.point <= b:
        return Verdict("Consistent", b)
    return Verdict("Inconclusive", b)


# --- scenario samplers -------------------------------------------------------

def example4_distribution() -> FiniteDistribution:
    return FiniteDistribution.uniform(np.concatenate((np.arange(98.0), EXAMPLE4_RANGES[1:])))


def example4_cells() -> list[Interval]:
    return [Interval(0, 97), Interval(1000, 1000), Interval(10000, 10000)]


def example5_distribution() -> FiniteDistribution:
    values = np.concatenate((np.arange(99.0), [INFINITY_PROXY]))
    probs = np.concatenate((np.full(99, 101 / 10000), [1 / 10000]))
    return FiniteDistribution(values, probs)


def example3_conditional_mean(n: int, p: float, B: float = 1.0) -> float:
    """``E(f | A)`` where ``A`` excludes the all-zero and all-one vectors."""
    mass_a = 1.0 - p ** n - (1.0 - p) ** n
    if mass_a <= 0:
        raise DomainError("the good set of example 3 is empty for n = 1")
    sum_given_a = (n * p - n * p ** n) / mass_a
    return 2.0 * (sum_given_a - n) / n


def truncated_abs_cauchy_mean(phi: float) -> float:
    """``E(|eps| | |eps| <= phi)`` for standard Cauchy ``eps``."""
    return math.log1p(phi * phi) / (2.0 * math.atan(phi))


def _deviations(spec: ScenarioSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Centred statistic for ``size`` independent sample vectors."""
    n = spec.n
    if spec.kind == "example3":
        x = rng.random((size, n)) < spec.bern_p
        s = x.sum(axis=1)
        f = np.where(s == 0, spec.B, np.where(s == n, -spec.B, 2.0 * (s - n) / n))
        return f - example3_conditional_mean(n, spec.bern_p, spec.B)
    if spec.kind == "example4":
        dist = example4_distribution()
        cells = example4_cells()
        x = dist.sample(rng, (size, n))
        means = np.array([conditional_mean_coordinate(dist, iv) for iv in cells])
        cell = np.searchsorted([iv.upper for iv in cells], x)
        return x.mean(axis=1) - means[cell].mean(axis=1)
    if spec.kind == "example5":
        dist = example5_distribution()
        x = dist.sample(rng, (size, n))
        center = conditional_mean_coordinate(dist, Interval(0, 98))
        return x.mean(axis=1) - center
    phi = example6_phi(n, spec.phi_exponent)
    eps = sample_cauchy(rng, (size, n))
    return np.abs(eps).mean(axis=1) - truncated_abs_cauchy_mean(phi)


def _chunk_trials(n: int) -> int:
    return max(1, min(MAX_CHUNK_TRIALS, CHUNK_ELEMENTS // n))


def count_hits(spec: ScenarioSpec, t: float, trials: int, seed: SeedSpec, workers: int = 1) -> int:
    chunk = _chunk_trials(spec.n)
    sizes = [min(chunk, trials - start) for start in range(0, trials, chunk)]

    def run(index: int) -> int:
        dev = _deviations(spec, seed.substream(index), sizes[index])
        hit = np.abs(dev) >= t if spec.two_sided else dev >= t
        return int(np.count_nonzero(hit))

    if workers <= 1:
        return sum(run(i) for i in range(len(sizes)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, range(len(sizes))))


def estimate_tail(
    scenario: ScenarioSpec,
    t: float | None = None,
    N: int = 100_000,
    seed: SeedSpec | int = 0,
    alpha: float = 0.001,
    workers: int = 1,
) -> TailEstimate:
    """Fraction of ``N`` sample vectors whose centred statistic reaches ``t``.

    Samples outside the good set are centred at the good-set conditional mean
    like every other sample and count toward the tail.
    """
    t = scenario.t if t is None else float(t)
    if not t >= 0:
        raise InputError(f"t must be >= 0, got {t}")
    if int(N) != N or N < 1:
        raise InputError(f"N must be a positive integer, got {N}")
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    if not isinstance(seed, SeedSpec):
        seed = SeedSpec(int(seed))
    hits = count_hits(scenario, t, int(N), seed, workers)
    low, high = clopper_pearson(hits, int(N), alpha)
    sided = TWO_SIDED if scenario.two_sided else ONE_SIDED
    return TailEstimate(int(N), hits, hits / N, low, high, 1.0 - alpha, sided)


# --- the two motivating examples -------------------------------------------

def example1_partial_expectation(n0: int, K: int) -> float:
    """Truncated ``E(X I(X > n0))`` for ``P(omega = k) = 6 / (pi^2 k^2)``, summed up to ``K``."""
    if n0 < 1 or K <= n0:
        raise InputError(f"need 1 <= n0 < K, got n0={n0}, K={K}")
    k = np.arange(n0 + 1, K + 1, dtype=float)
    return 6.0 / math.pi ** 2 * math.fsum((1.0 / k).tolist())


def example2_stats(M: int, n: int) -> tuple[float, float]:
    """Tail mass ``P(all X_i = M)`` and ``E(f)`` for ``f = M**n`` on that event, 0 elsewhere."""
    if M < 2 or n < 1:
        raise InputError(f"need M > 1 and n >= 1, got M={M}, n={n}")
    tail = Fraction(1, M ** n)
    return float(tail), float(M ** n * tail)
