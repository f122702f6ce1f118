"""Worked examples: closed-form bound curves against the sample size ``n``.

Four examples are covered:

* ``example3`` -- Bernoulli coordinates, a function with a bounded-differences
  constant ``2/n`` off the two constant vectors; the Combes bound against the
  probabilistic-boundedness corollary.
* ``example4`` -- coordinates uniform on ``{0..97, 1000, 10000}``; classical
  McDiarmid with the worst constant, the worst-level envelope, and the exact
  cell aggregation.
* ``example5`` -- coordinates with an (effectively) infinite atom of mass
  ``1e-4``; the corollary for differences bounded on a high-probability set.
* ``example6`` -- Cauchy regression noise under absolute loss, truncated at
  ``phi(n) = n**phi_exponent``.

All curves are one-sided, matching the printed closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

from .bounds import (
    BoundReport,
    combes_bound,
    corollary1_bound,
    level_envelope_bound,
    theorem2_bound,
)
from .coords import CoordinateSpec, DiffLevel, Interval
from .errors import InputError

EXAMPLES = ("example3", "example4", "example5", "example6")

DEFAULT_T = {"example3": 0.5, "example4": 25.0, "example5": 3.0, "example6": 50.0}
DEFAULT_RANGE = {
    "example3": (1, 100, 1),
    "example4": (10, 5000, 10),
    "example5": (100, 5000, 10),
    "example6": (100, 10000, 25),
}

EXAMPLE5_BAD_MASS = 1e-4
EXAMPLE5_RANGE = 98.0
EXAMPLE4_MASSES = (0.98, 0.01, 0.01)
EXAMPLE4_RANGES = (97.0, 1000.0, 10000.0)


@dataclass(frozen=True)
class ScenarioSpec:
    """A fully parameterised example instance.

    ``variant`` selects between the printed and the corrected closed forms
    where they differ: ``example5`` accepts ``"corrected"`` (default) or
    ``"printed"``; ``example6`` accepts ``"printed"`` (default) or
    ``"two_sided_truncation"``.  ``general_form`` evaluates ``example3``
    through the general corollary with the actual bad-set mass ``2**(1-n)``.
    """

    kind: str
    n: int
    t: float | None = None
    B: float = 1.0
    bern_p: float = 0.5
    phi_exponent: Fraction = Fraction(1001, 1000)
    variant: str | None = None
    general_form: bool = False
    two_sided: bool = False

    def __post_init__(self):
        if self.kind not in EXAMPLES:
            raise InputError(f"unknown example {self.kind!r}; expected one of {EXAMPLES}")
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.t is None:
            object.__setattr__(self, "t", DEFAULT_T[self.kind])
        if not self.t >= 0:
            raise InputError(f"t must be >= 0, got {self.t}")
        if not Fraction(self.phi_exponent) > 1:
            raise InputError(f"phi_exponent must exceed 1, got {self.phi_exponent}")
        if not 0 < self.bern_p < 1:
            raise InputError(f"bern_p must lie in (0, 1), got {self.bern_p}")
        if self.variant is None:
            default = {"example5": "corrected", "example6": "printed"}.get(self.kind)
            object.__setattr__(self, "variant", default)
        allowed = {
            "example5": ("corrected", "printed"),
            "example6": ("printed", "two_sided_truncation"),
        }.get(self.kind, (None,))
        if self.variant not in allowed:
            raise InputError(f"variant {self.variant!r} not available for {self.kind}")


class CurveSeries(NamedTuple):
    method: str
    points: list[tuple[int, float]]

    @property
    def ns(self) -> list[int]:
        return [n for n, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]


def _pow_near_one(deficit: float, n: int) -> float:
    """``(1 - deficit)**n`` through log1p."""
    return math.exp(n * math.log1p(-deficit))


# --- example 3 ---------------------------------------------------------------

def example3_bounds(n: int, t: float) -> tuple[float, float]:
    """Printed one-sided (Combes, corollary) bounds on ``P(f(X) >= t)``."""
    half = 2.0 ** -n
    shifted = max(t - 2.0 ** (1 - n), 0.0)
    combes = half + math.exp(-(n / 2.0) * shifted ** 2)
    cor1 = half + (1.0 - half) * math.exp(-(n / 2.0) * t ** 2)
    return combes, cor1


def example3_general(n: int, t: float, bern_p: float = 0.5) -> tuple[float, float]:
    """Example 3 through the general bounds, with the true bad-set mass."""
    bad = bern_p ** n + (1.0 - bern_p) ** n
    c = [2.0 / n] * n
    combes = combes_bound(c, bad, t, two_sided=False).raw
    cor1 = corollary1_bound([Interval(0.0, 2.0 / n)] * n, 1.0 - bad, t, two_sided=False).raw
    return combes, cor1


# --- example 4 ---------------------------------------------------------------

def example4_levels(n: int) -> list[DiffLevel]:
    return [DiffLevel(r / n, p) for r, p in zip(EXAMPLE4_RANGES, EXAMPLE4_MASSES)]


def example4_bounds(n: int, t: float) -> tuple[float, float, float]:
    """One-sided (McDiarmid with the worst constant, envelope, exact aggregation)."""
    mcdiarmid = math.exp(-2.0 * t * t * n / EXAMPLE4_RANGES[-1] ** 2)
    levels = example4_levels(n)
    envelope = level_envelope_bound(levels, n, t).raw
    full = theorem2_bound(CoordinateSpec.iid(levels, n), t, method="iid", two_sided=False).raw
    return mcdiarmid, envelope, full


# --- example 5 ---------------------------------------------------------------

def example5_bound(n: int, t: float, variant: str = "corrected") -> float:
    good = _pow_near_one(EXAMPLE5_BAD_MASS, n)
    core = good * math.exp(-2.0 * t * t * n / EXAMPLE5_RANGE ** 2)
    if variant == "corrected":
        return core + (1.0 - good)
    if variant == "printed":
        return core + good
    raise InputError(f"unknown example5 variant {variant!r}")


# --- example 6 ---------------------------------------------------------------

def example6_phi(n: int, phi_exponent=Fraction(1001, 1000)) -> float:
    return float(n) ** float(Fraction(phi_exponent))


def example6_truncation_deficit(phi: float, variant: str = "printed") -> float:
    """Per-coordinate deficit ``1 - P(A_i)`` of the truncation set.

    ``printed`` uses ``1/2 + arctan(phi)/pi`` (a one-sided CDF value) and
    ``two_sided_truncation`` uses ``P(|eps| <= phi) = 2 arctan(phi)/pi``.
    """
    deficit = math.atan(1.0 / phi) / math.pi
    if variant == "printed":
        return deficit
    if variant == "two_sided_truncation":
        return 2.0 * deficit
    raise InputError(f"unknown example6 variant {variant!r}")


def example6_bound(n: int, t: float, phi_exponent=Fraction(1001, 1000), variant: str = "printed") -> float:
    phi = example6_phi(n, phi_exponent)
    good = _pow_near_one(example6_truncation_deficit(phi, variant), n)
    return good * math.exp(-2.0 * n * t * t / phi ** 2) + (1.0 - good)


# --- bound reports and sweeps --------------------------------------------------

def method_labels(spec: ScenarioSpec) -> list[str]:
    if spec.kind == "example3":
        labels = ["combes", "cor1"]
        if spec.general_form:
            labels += ["combes_general", "cor1_general"]
        return labels
    if spec.kind == "example4":
        return ["mcdiarmid", "envelope", "full_dp"]
    return [f"cor2_{spec.variant}"]


def evaluate(spec: ScenarioSpec) -> dict[str, float]:
    """All method values of a scenario at its ``n`` and ``t``."""
    n, t = spec.n, spec.t
    if spec.kind == "example3":
        out = dict(zip(("combes", "cor1"), example3_bounds(n, t)))
        if spec.general_form:
            out.update(zip(("combes_general", "cor1_general"), example3_general(n, t, spec.bern_p)))
        return out
    if spec.kind == "example4":
        return dict(zip(("mcdiarmid", "envelope", "full_dp"), example4_bounds(n, t)))
    if spec.kind == "example5":
        return {f"cor2_{spec.variant}": example5_bound(n, t, spec.variant)}
    return {f"cor2_{spec.variant}": example6_bound(n, t, spec.phi_exponent, spec.variant)}


def scenario_bound(spec: ScenarioSpec, method: str | None = None) -> BoundReport:
    """The one-sided bound a Monte Carlo run of ``spec`` is checked against.

    Defaults: ``cor1`` (or ``cor1_general``) for example 3, ``full_dp`` for
    example 4, and the selected corollary variant for examples 5 and 6.
    """
    if spec.two_sided:
        raise InputError("the example bounds are one-sided")
    values = evaluate(spec)
    if method is None:
        method = {
            "example3": "cor1_general" if spec.general_form else "cor1",
            "example4": "full_dp",
        }.get(spec.kind, f"cor2_{spec.variant}")
    if method not in values:
        raise InputError(f"method {method!r} not available for {spec.kind}; have {sorted(values)}")
    return BoundReport.make(values[method], method, spec.t, two_sided=False)


def n_grid(n_min: int, n_max: int, n_step: int) -> range:
    if not (int(n_min) == n_min and int(n_max) == n_max and int(n_step) == n_step):
        raise InputError("range bounds and step must be integers")
    if n_min < 1 or n_max < n_min or n_step < 1:
        raise InputError(f"invalid range n_min={n_min}, n_max={n_max}, n_step={n_step}")
    return range(int(n_min), int(n_max) + 1, int(n_step))


def sweep(template: ScenarioSpec, n_min: int, n_max: int, n_step: int, t: float | None = None) -> list[CurveSeries]:
    """Evaluate every method of ``template`` on an ``n`` grid."""
    grid = n_grid(n_min, n_max, n_step)
    t = template.t if t is None else t
    labels = method_labels(template)
    series = {m: [] for m in labels}
    for n in grid:
        values = evaluate(replace(template, n=n, t=t))
        for m in labels:
            series[m].append((n, values[m]))
    return [CurveSeries(m, series[m]) for m in labels]


def find_crossing(series: CurveSeries, level: float) -> int | None:
    """Smallest ``n`` whose value exceeds ``level``."""
    if not series.points:
        raise InputError("empty series")
    for n, v in series.points:
        if v > level:
            return n
    return None


def find_min(series: CurveSeries) -> tuple[int, float]:
    """Grid argmin; the first point wins ties."""
    if not series.points:
        raise InputError("empty series")
    best = series.points[0]
    for p in series.points[1:]:
        if p[1] < best[1]:
            best = p
    return best
