"""Three ways to sum over the partition cells.

Brute force visits all ``k**n`` cells.  Convolution tracks the distribution
of the weight sum one coordinate at a time.  For i.i.d. coordinates the
weight sum only depends on how many coordinates sit at each level, so the
composition route enumerates those counts directly.
"""
import time

from distbounds import BruteForce, CoordinateSpec, DiffLevel, aggregate, weight_distribution
from distbounds.partition import default_merge_tolerance

levels = [DiffLevel(0.5, 0.6), DiffLevel(1.0, 0.3), DiffLevel(3.0, 0.1)]

# %% small n: all three routes agree
spec = CoordinateSpec.iid(levels, 8)
for method in (BruteForce(), "conv", "iid"):
    dist = weight_distribution(spec, method)
    print(f"{str(method):>28}: atoms={dist.size:5d} value={aggregate(dist, 2.0):.15f}")

# %% large n: only the compressed routes are feasible
spec = CoordinateSpec.iid(levels, 600)
print("merge tolerance", default_merge_tolerance(spec))
for method in ("conv", "iid"):
    start = time.perf_counter()
    dist = weight_distribution(spec, method)
    value = aggregate(dist, 20.0)
    print(f"{method:>5}: atoms={dist.size:7d} value={value:.12e} ({time.perf_counter() - start:.2f} s)")
