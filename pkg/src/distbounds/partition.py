"""Product partitions and the weighted exponential sum over their cells.

Every cell of the product partition picks one level per coordinate.  Its
probability is the product of the picked level probabilities and its weight
sum is the sum of the picked level weights.  The distribution-dependent
bounds all reduce to

    sum over cells of P(cell) * exp(-2 t^2 / weight_sum(cell))

which only depends on the distribution of the weight sum.  Three routes
compute that distribution:

* :class:`BruteForce` walks every cell (guarded by a cell-count limit);
* :class:`Convolution` convolves coordinates one at a time, optionally
  merging atoms that are closer than a tolerance;
* :class:`IIDComposition` enumerates level-count compositions when all
  coordinates share the same levels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence, Union

import numpy as np
from scipy.special import gammaln

from .coords import PROB_TOL, CoordinateSpec
from .errors import InputError, ResourceError

CELL_GUARD = 2 ** 20

# exp() of anything below this is exactly 0.0 in double precision
_LOG_UNDERFLOW = -746.0


class WeightedAtom(NamedTuple):
    weight_sum: float
    prob: float


@dataclass(frozen=True)
class WeightSumDistribution:
    """Finite distribution of the cell weight sum, sorted by weight."""

    weights: np.ndarray
    probs: np.ndarray
    merge_tolerance: float = 0.0

    @property
    def atoms(self) -> list[WeightedAtom]:
        return [WeightedAtom(float(w), float(p)) for w, p in zip(self.weights, self.probs)]

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.probs.tolist())


@dataclass(frozen=True)
class BruteForce:
    guard: int = CELL_GUARD


@dataclass(frozen=True)
class Convolution:
    merge_tolerance: float | None = None


@dataclass(frozen=True)
class IIDComposition:
    pass


AggregationMethod = Union[BruteForce, Convolution, IIDComposition]

_METHOD_NAMES = {"brute": BruteForce, "conv": Convolution, "iid": IIDComposition}


def resolve_method(method, spec: CoordinateSpec) -> AggregationMethod:
    """Turn ``"auto"``/``"brute"``/``"conv"``/``"iid"`` or an instance into a method."""
    if isinstance(method, (BruteForce, Convolution, IIDComposition)):
        m = method
    elif method == "auto" or method is None:
        m = IIDComposition() if spec.iid_flag else Convolution()
    elif method in _METHOD_NAMES:
        m = _METHOD_NAMES[method]()
    else:
        raise InputError(f"unknown aggregation method {method!r}")
    if isinstance(m, IIDComposition) and not spec.iid_flag:
        raise InputError("IIDComposition requires an i.i.d. spec")
    return m


def default_merge_tolerance(spec: CoordinateSpec) -> float:
    wmax = max(max(w) for w in spec.weights())
    return 1e-12 * wmax * spec.n


def _compress(weights: np.ndarray, probs: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Sort atoms, drop zero mass and merge neighbours within ``tol`` (single linkage)."""
    keep = probs > 0
    weights, probs = weights[keep], probs[keep]
    if weights.size == 0:
        return weights, probs
    order = np.argsort(weights, kind="stable")
    weights, probs = weights[order], probs[order]
    gaps = np.diff(weights)
    starts = np.concatenate(([0], np.nonzero(gaps > tol)[0] + 1))
    if starts.size == weights.size:
        return weights, probs
    mass = np.add.reduceat(probs, starts)
    if tol == 0:
        rep = weights[starts]
    else:
        rep = np.add.reduceat(probs * weights, starts) / mass
        # a cluster of identical weights keeps its exact value
        ends = np.concatenate((starts[1:], [weights.size])) - 1
        same = weights[starts] == weights[ends]
        rep[same] = weights[starts][same]
    return rep, mass


def _distribution(weights, probs, tol: float = 0.0) -> WeightSumDistribution:
    w, p = _compress(np.asarray(weights, dtype=float), np.asarray(probs, dtype=float), tol)
    return WeightSumDistribution(w, p, float(tol))


def enumerate_cells(spec: CoordinateSpec, guard: int = CELL_GUARD) -> Iterator[tuple[tuple[int, ...], float, float]]:
    """Yield ``(cell_index, prob, weight_sum)`` for every partition cell.

    Indices are 0-based per coordinate.  Raises :class:`ResourceError` when the
    number of cells exceeds ``guard``.
    """
    counts = spec.level_counts
    total = math.prod(counts)
    if total > guard:
        raise ResourceError(f"partition has {total} cells (product of level counts), guard is {guard}")
    weights = spec.weights()
    probs = spec.probs()
    for cell in itertools.product(*(range(k) for k in counts)):
        p = 1.0
        ws = 0.0
        for i, j in enumerate(cell):
            p *= probs[i][j]
            ws += weights[i][j]
        yield cell, p, ws


def brute_force(spec: CoordinateSpec, guard: int = CELL_GUARD) -> WeightSumDistribution:
    by_weight: dict[float, list[float]] = {}
    for _, p, ws in enumerate_cells(spec, guard):
        by_weight.setdefault(ws, []).append(p)
    w = np.fromiter(by_weight.keys(), dtype=float, count=len(by_weight))
    p = np.array([math.fsum(v) for v in by_weight.values()])
    return _distribution(w, p, 0.0)


def convolve(spec: CoordinateSpec, merge_tolerance: float = 0.0) -> WeightSumDistribution:
    """Sequential convolution of the per-coordinate (weight, prob) levels.

    After each coordinate, atoms whose weight sums lie within
    ``merge_tolerance`` of their neighbour are merged into one atom located at
    the probability-weighted mean.  ``merge_tolerance=0`` is exact.
    """
    if merge_tolerance < 0 or not math.isfinite(merge_tolerance):
        raise InputError(f"merge_tolerance must be finite and >= 0, got {merge_tolerance}")
    w = np.zeros(1)
    p = np.ones(1)
    for wi, pi in zip(spec.weights(), spec.probs()):
        wi = np.asarray(wi, dtype=float)
        pi = np.asarray(pi, dtype=float)
        w, p = _compress((w[:, None] + wi[None, :]).ravel(), (p[:, None] * pi[None, :]).ravel(), merge_tolerance)
    return WeightSumDistribution(w, p, float(merge_tolerance))


@lru_cache(maxsize=8)
def _log_factorials(size: int) -> np.ndarray:
    out = gammaln(np.arange(size + 1, dtype=float) + 1.0)
    out.setflags(write=False)
    return out


def log_factorial_table(n: int) -> np.ndarray:
    """``table[m] = log(m!)`` for ``m = 0..n`` (at least)."""
    size = 1 << max(int(n), 1).bit_length()  # round up so nearby n share a table
    return _log_factorials(size)


def log_multinomial(n: int, m: Sequence[int]) -> float:
    """Log of the multinomial coefficient ``n! / prod(m_j!)``."""
    m = [int(x) for x in m]
    if any(x < 0 for x in m):
        raise InputError("multinomial counts must be nonnegative")
    if sum(m) != n:
        raise InputError(f"counts sum to {sum(m)}, expected n={n}")
    lf = log_factorial_table(n)
    return float(lf[n] - math.fsum(lf[x] for x in m))


def iid_compositions(levels: Sequence[tuple[float, float]], n: int) -> WeightSumDistribution:
    """Weight-sum distribution for ``n`` i.i.d. coordinates by composition enumeration.

    Each composition ``(m_1, ..., m_k)`` of ``n`` has probability
    ``multinomial(n, m) * prod p_j**m_j`` at weight ``sum m_j * w_j``.
    Prefixes whose marginal probability is below the double-precision
    underflow threshold are skipped; every composition they contain would
    evaluate to exactly 0.
    """
    if len(levels) == 0:
        raise InputError("at least one level is required")
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n}")
    n = int(n)
    ws = [float(w) for w, _ in levels]
    ps = [float(p) for _, p in levels]
    if any(p < 0 for p in ps) or abs(math.fsum(ps) - 1.0) > PROB_TOL:
        raise InputError(f"level probabilities must be nonnegative and sum to 1, got {ps}")
    live = [(w, p) for w, p in zip(ws, ps) if p > 0]
    ws = [w for w, _ in live]
    lps = [math.log(p) for _, p in live]
    k = len(live)
    lf = log_factorial_table(n)
    # mass of levels j..k-1, for lumping the not-yet-assigned remainder
    rest = [math.fsum(p for _, p in live[j:]) for j in range(k)]

    remaining = np.array([n], dtype=np.int64)
    acc = np.zeros(1)      # sum m*log p - sum log m! over assigned levels
    weight = np.zeros(1)
    for j in range(k - 1):
        counts = remaining + 1
        parent = np.repeat(np.arange(remaining.size), counts)
        offsets = np.arange(parent.size) - np.repeat(np.cumsum(counts) - counts, counts)
        m = offsets.astype(np.int64)
        r = remaining[parent] - m
        a = acc[parent] + m * lps[j] - lf[m]
        # marginal of the prefix with the remainder lumped into one cell
        marginal = lf[n] + a - lf[r] + r * math.log(rest[j + 1])
        keep = marginal >= _LOG_UNDERFLOW
        remaining = r[keep]
        acc = a[keep]
        weight = weight[parent][keep] + m[keep] * ws[j]
    acc = acc + remaining * lps[k - 1] - lf[remaining]
    weight = weight + remaining * ws[k - 1]
    probs = np.exp(lf[n] + acc)
    return _distribution(weight, probs, 0.0)


def weight_distribution(spec: CoordinateSpec, method="auto") -> WeightSumDistribution:
    """Weight-sum distribution of ``spec`` using the requested aggregation method."""
    m = resolve_method(method, spec)
    if isinstance(m, BruteForce):
        return brute_force(spec, m.guard)
    if isinstance(m, Convolution):
        tol = default_merge_tolerance(spec) if m.merge_tolerance is None else m.merge_tolerance
        return convolve(spec, tol)
    levels = [(lv.weight, lv.prob) for lv in spec.shared_levels]
    return iid_compositions(levels, spec.n)


def exp_terms(weights: np.ndarray, t: float) -> np.ndarray:
    """``exp(-2 t^2 / w)``, with zero weights giving 1 at ``t == 0`` and 0 otherwise."""
    weights = np.asarray(weights, dtype=float)
    if t == 0:
        return np.ones_like(weights)
    out = np.zeros_like(weights)
    pos = weights > 0
    out[pos] = np.exp(-2.0 * t * t / weights[pos])
    return out


def aggregate(dist: WeightSumDistribution, t: float) -> float:
    """Sum of ``prob * exp(-2 t^2 / weight_sum)`` over the atoms of ``dist``."""
    if not t >= 0:
        raise InputError(f"t must be >= 0, got {t}")
    terms = dist.probs * exp_terms(dist.weights, t)
    if terms.size == 0:
        return 0.0
    # terms this small add less than 2**-64 of the largest term in total,
    # far below one ulp of the sum; dropping them keeps fsum fast
    cutoff = terms.max() * 2.0 ** -64 / terms.size
    return math.fsum(terms[terms > cutoff].tolist())
