"""Distribution-dependent extensions of Hoeffding's and McDiarmid's inequalities.

The package evaluates the classical bounds and their distribution-dependent
refinements (hierarchies of intervals or difference constants over a product
partition), checks them against seeded Monte Carlo estimates, and regenerates
the curves of the worked examples.
"""

from .bounds import (
    BoundReport,
    combes_bound,
    corollary1_bound,
    corollary2_bound,
    hoeffding_bound,
    lemma1_cell_bound,
    level_envelope_bound,
    mcdiarmid_bound,
    theorem1_bound,
    theorem2_bound,
    worst_case_envelope,
)
from .coords import CoordinateSpec, DiffLevel, Interval, IntervalLevel
from .errors import DomainError, InputError, ResourceError
from .partition import (
    BruteForce,
    Convolution,
    IIDComposition,
    WeightSumDistribution,
    aggregate,
    convolve,
    enumerate_cells,
    iid_compositions,
    log_multinomial,
    weight_distribution,
)

__all__ = [
    "BoundReport",
    "BruteForce",
    "Convolution",
    "CoordinateSpec",
    "DiffLevel",
    "DomainError",
    "IIDComposition",
    "InputError",
    "Interval",
    "IntervalLevel",
    "ResourceError",
    "WeightSumDistribution",
    "aggregate",
    "combes_bound",
    "convolve",
    "corollary1_bound",
    "corollary2_bound",
    "enumerate_cells",
    "hoeffding_bound",
    "iid_compositions",
    "lemma1_cell_bound",
    "level_envelope_bound",
    "log_multinomial",
    "mcdiarmid_bound",
    "theorem1_bound",
    "theorem2_bound",
    "weight_distribution",
    "worst_case_envelope",
]

__version__ = "0.1.0"
