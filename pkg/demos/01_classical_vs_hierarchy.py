"""Classical bounds against their distribution-dependent refinements.

Each coordinate of the statistic has a range that is usually small and only
occasionally large.  The classical Hoeffding bound has to use the large range
on every coordinate; the hierarchy bound averages over which coordinates
actually hit it.
"""
import numpy as np

from distbounds import (
    CoordinateSpec,
    IntervalLevel,
    hoeffding_bound,
    theorem1_bound,
    worst_case_envelope,
)

# %% one coordinate law: width 1 with probability 0.9, width 10 otherwise
levels = [IntervalLevel((0.0, 1.0), 0.9), IntervalLevel((0.0, 10.0), 0.1)]
n = 40
spec = CoordinateSpec.iid(levels, n)
envelope = worst_case_envelope(spec)

# %% compare over a grid of deviations
print(f"{'t':>6} {'hoeffding':>12} {'hierarchy':>12}")
for t in np.linspace(0.0, 30.0, 7):
    classic = hoeffding_bound(envelope, t)
    refined = theorem1_bound(spec, t)
    print(f"{t:6.1f} {classic.clamped:12.6f} {refined.clamped:12.6f}")

# %% the two agree when there is only one level
single = CoordinateSpec.iid([IntervalLevel((0.0, 1.0), 1.0)], n)
t = 5.0
print(theorem1_bound(single, t).raw == hoeffding_bound(worst_case_envelope(single), t).raw)
