"""Closed-form tail bounds.

All functions return a :class:`BoundReport`.  ``raw`` is the value of the
formula and may exceed 1; ``clamped`` is ``min(raw, 1)``.  Two-sided forms
carry the usual factor 2 on the exponential term, one-sided forms drop it.

A zero exponent denominator means the centred statistic is almost surely
zero, so the exponential factor is taken as 1 at ``t == 0`` and 0 for
``t > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .coords import CoordinateSpec, DiffLevel, Interval, as_diffs, as_intervals
from .errors import InputError
from .partition import aggregate, weight_distribution

ONE_SIDED = "one-sided"
TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class BoundReport:
    raw: float
    clamped: float
    method: str
    t: float
    sided: str

    @classmethod
    def make(cls, raw: float, method: str, t: float, two_sided: bool) -> "BoundReport":
        raw = max(float(raw), 0.0)
        return cls(raw, min(raw, 1.0), method, float(t), TWO_SIDED if two_sided else ONE_SIDED)


def _check_t(t: float) -> float:
    t = float(t)
    if not (t >= 0 and math.isfinite(t)):
        raise InputError(f"t must be finite and >= 0, got {t}")
    return t


def _check_p(p: float, name: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InputError(f"{name} must lie in [0, 1], got {p}")
    return p


def exp_factor(t: float, denom: float) -> float:
    """``exp(-2 t^2 / denom)`` with the degenerate rule for ``denom == 0``."""
    if denom == 0:
        return 1.0 if t == 0 else 0.0
    return math.exp(-2.0 * t * t / denom)


# plain left-to-right sums: the same float operations as the cell aggregation,
# so single-level hierarchies reproduce the classical bounds bit for bit
def _sq_widths(intervals) -> float:
    return sum((iv.width ** 2 for iv in as_intervals(intervals)), 0.0)


def _sq_diffs(diffs) -> float:
    return sum((c ** 2 for c in as_diffs(diffs)), 0.0)


def _factor(two_sided: bool) -> float:
    return 2.0 if two_sided else 1.0


def hoeffding_bound(intervals: Sequence[Interval], t: float, two_sided: bool = True) -> BoundReport:
    t = _check_t(t)
    raw = _factor(two_sided) * exp_factor(t, _sq_widths(intervals))
    return BoundReport.make(raw, "hoeffding", t, two_sided)


def mcdiarmid_bound(diffs: Sequence[float], t: float, two_sided: bool = True) -> BoundReport:
    t = _check_t(t)
    raw = _factor(two_sided) * exp_factor(t, _sq_diffs(diffs))
    return BoundReport.make(raw, "mcdiarmid", t, two_sided)


def combes_bound(diffs: Sequence[float], p: float, t: float, two_sided: bool = True) -> BoundReport:
    """McDiarmid-type bound on a high-probability set; ``p`` is the mass of the bad set."""
    t = _check_t(t)
    p = _check_p(p, "p")
    cs = as_diffs(diffs)
    shifted = max(t - p * math.fsum(cs), 0.0)
    raw = _factor(two_sided) * (p + exp_factor(shifted, _sq_diffs(cs)))
    return BoundReport.make(raw, "combes", t, two_sided)


def corollary1_bound(intervals: Sequence[Interval], pA: float, t: float, two_sided: bool = True) -> BoundReport:
    t = _check_t(t)
    pA = _check_p(pA, "pA")
    raw = _factor(two_sided) * pA * exp_factor(t, _sq_widths(intervals)) + (1.0 - pA)
    return BoundReport.make(raw, "cor1", t, two_sided)


def corollary2_bound(diffs: Sequence[float], pA: float, t: float, two_sided: bool = True) -> BoundReport:
    t = _check_t(t)
    pA = _check_p(pA, "pA")
    raw = _factor(two_sided) * pA * exp_factor(t, _sq_diffs(diffs)) + (1.0 - pA)
    return BoundReport.make(raw, "cor2", t, two_sided)


def lemma1_cell_bound(cell_intervals: Sequence[Interval], cell_prob: float, t: float) -> BoundReport:
    """One-sided bound on the deviation event intersected with a single cell."""
    t = _check_t(t)
    cell_prob = _check_p(cell_prob, "cell_prob")
    raw = cell_prob * exp_factor(t, _sq_widths(cell_intervals))
    return BoundReport.make(raw, "lemma1", t, False)


def _theorem(spec: CoordinateSpec, kind: str, t: float, method, two_sided: bool, tag: str) -> BoundReport:
    t = _check_t(t)
    if spec.kind != kind:
        raise InputError(f"{tag} needs {kind} levels, got {spec.kind} levels")
    spec.require_hierarchy()
    dist = weight_distribution(spec, method)
    return BoundReport.make(_factor(two_sided) * aggregate(dist, t), tag, t, two_sided)


def theorem1_bound(spec: CoordinateSpec, t: float, method="auto", two_sided: bool = True) -> BoundReport:
    """Hoeffding bound averaged over the cells of a hierarchy of intervals."""
    return _theorem(spec, "interval", t, method, two_sided, "thm1")


def theorem2_bound(spec: CoordinateSpec, t: float, method="auto", two_sided: bool = True) -> BoundReport:
    """McDiarmid bound averaged over the cells of a hierarchy of difference constants."""
    return _theorem(spec, "diff", t, method, two_sided, "thm2")


def level_envelope_bound(levels: Sequence[DiffLevel], n: int, t: float, two_sided: bool = False) -> BoundReport:
    """Bound obtained by charging every cell with its worst level.

    For i.i.d. coordinates with constants ``c_1 <= ... <= c_k`` the cells whose
    worst level is ``j`` have total mass ``Q_j**n - Q_{j-1}**n`` (``Q_j`` the
    cumulative level probability) and weight sum at most ``n * c_j**2``.
    """
    t = _check_t(t)
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n}")
    levels = list(levels)
    if not levels:
        raise InputError("at least one level is required")
    cs = [lv.c for lv in levels]
    if any(b < a for a, b in zip(cs, cs[1:])):
        raise InputError(f"levels must be sorted ascending by c, got {cs}")
    ps = [lv.prob for lv in levels]
    if abs(math.fsum(ps) - 1.0) > 1e-12:
        raise InputError(f"level probabilities sum to {math.fsum(ps)!r}, expected 1")
    # Q_j**n from the upper tail 1 - Q_j, which stays accurate when Q_j is near 1
    powers = [0.0]
    for j in range(len(ps)):
        tail = math.fsum(ps[j + 1:])
        powers.append(math.exp(n * math.log1p(-min(tail, 1.0))) if tail < 1 else 0.0)
    powers[-1] = 1.0
    raw = math.fsum((powers[j + 1] - powers[j]) * exp_factor(t, n * c * c) for j, c in enumerate(cs))
    return BoundReport.make(_factor(two_sided) * raw, "envelope", t, two_sided)


def worst_case_envelope(spec: CoordinateSpec):
    """Per-coordinate worst level: widest interval hull, or largest constant."""
    if spec.kind == "interval":
        return [
            Interval(min(lv.interval.lower for lv in levels), max(lv.interval.upper for lv in levels))
            for levels in spec.coordinates
        ]
    return [max(lv.c for lv in levels) for levels in spec.coordinates]
