"""Per-coordinate level descriptions used by every bound.

A coordinate is described by one or more *levels*.  An interval level says
``P(a <= X_i <= b) = p``; a difference level says that on a set of mass ``p``
the function moves by at most ``c`` when coordinate ``i`` changes.  Both
reduce to a squared *weight* (``(b - a)**2`` or ``c**2``) that enters the
exponent of the tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import InputError

PROB_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InputError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise InputError(f"interval lower {lo} exceeds upper {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper


def _check_prob(p: float, what: str) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise InputError(f"{what} must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class IntervalLevel:
    interval: Interval
    prob: float

    def __post_init__(self):
        if not isinstance(self.interval, Interval):
            object.__setattr__(self, "interval", Interval(*self.interval))
        object.__setattr__(self, "prob", _check_prob(self.prob, "level prob"))

    @property
    def weight(self) -> float:
        return self.interval.width ** 2


@dataclass(frozen=True)
class DiffLevel:
    c: float
    prob: float

    def __post_init__(self):
        c = float(self.c)
        if not math.isfinite(c) or c < 0:
            raise InputError(f"difference constant must be finite and >= 0, got {c}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "prob", _check_prob(self.prob, "level prob"))

    @property
    def weight(self) -> float:
        return self.c ** 2


Level = Union[IntervalLevel, DiffLevel]


@dataclass(frozen=True, init=False)
class CoordinateSpec:
    """Levels for each of ``n`` independent coordinates.

    Build with :meth:`from_levels` for heterogeneous coordinates or
    :meth:`iid` when every coordinate shares one level list.  The level kind
    (interval or difference) must be uniform across the spec.
    """

    coordinates: tuple[tuple[Level, ...], ...]
    iid_flag: bool
    kind: str  # "interval" | "diff"

    def __init__(self, coordinates: Iterable[Sequence[Level]], iid_flag: bool = False):
        coords = tuple(tuple(c) for c in coordinates)
        if not coords:
            raise InputError("a coordinate spec needs at least one coordinate")
        if iid_flag and any(c != coords[0] for c in coords[1:]):
            raise InputError("an i.i.d. spec needs the same level list on every coordinate")
        kinds = set()
        # an i.i.d. spec repeats one level list, so checking it once suffices
        for i, levels in enumerate(coords[:1] if iid_flag else coords):
            if not levels:
                raise InputError(f"coordinate {i} has no levels")
            for lv in levels:
                if isinstance(lv, IntervalLevel):
                    kinds.add("interval")
                elif isinstance(lv, DiffLevel):
                    kinds.add("diff")
                else:
                    raise InputError(f"coordinate {i}: unsupported level {lv!r}")
        if len(kinds) != 1:
            raise InputError("interval and difference levels cannot be mixed")
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "iid_flag", bool(iid_flag))
        object.__setattr__(self, "kind", kinds.pop())

    @classmethod
    def from_levels(cls, coordinates: Iterable[Sequence[Level]]) -> "CoordinateSpec":
        return cls(coordinates, iid_flag=False)

    @classmethod
    def iid(cls, levels: Sequence[Level], n: int) -> "CoordinateSpec":
        if int(n) != n or n < 1:
            raise InputError(f"n must be a positive integer, got {n}")
        levels = tuple(levels)
        return cls([levels] * int(n), iid_flag=True)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def level_counts(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.coordinates)

    @property
    def shared_levels(self) -> tuple[Level, ...]:
        if not self.iid_flag:
            raise InputError("shared levels are only defined for i.i.d. specs")
        return self.coordinates[0]

    def weights(self) -> list[list[float]]:
        return [[lv.weight for lv in levels] for levels in self.coordinates]

    def probs(self) -> list[list[float]]:
        return [[lv.prob for lv in levels] for levels in self.coordinates]

    def is_hierarchy(self, tol: float = PROB_TOL) -> bool:
        try:
            self.require_hierarchy(tol)
        except InputError:
            return False
        return True

    def require_hierarchy(self, tol: float = PROB_TOL) -> None:
        probs = [[lv.prob for lv in self.coordinates[0]]] if self.iid_flag else self.probs()
        for i, p in enumerate(probs):
            s = math.fsum(p)
            if abs(s - 1.0) > tol:
                raise InputError(f"coordinate {i}: level probabilities sum to {s!r}, expected 1")


def as_intervals(intervals) -> list[Interval]:
    """Coerce ``[(a, b), ...]`` or ``[Interval, ...]`` to a list of intervals."""
    out = [iv if isinstance(iv, Interval) else Interval(*iv) for iv in intervals]
    if not out:
        raise InputError("at least one interval is required")
    return out


def as_diffs(diffs) -> list[float]:
    out = [float(c) for c in diffs]
    if not out:
        raise InputError("at least one difference constant is required")
    for i, c in enumerate(out):
        if not math.isfinite(c) or c < 0:
            raise InputError(f"difference constant {i} must be finite and >= 0, got {c}")
    return out
