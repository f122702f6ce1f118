"""Curves of the four worked examples against the sample size.

Writes one CSV per panel into the current directory and prints the features
each curve is known for.  Plotting is left to whatever tool reads the CSVs.
"""
from distbounds.cli import main
from distbounds.scenarios import ScenarioSpec, find_crossing, find_min, sweep

for panel in (3, 4, 5, 6):
    main(["repro", str(panel), "--out", f"panel_{panel}.csv"])

# %% example 3: the corollary sits below the Combes bound
combes, cor1 = sweep(ScenarioSpec("example3", 1), 1, 100, 1)
print("max combes - cor1:", max(b - c for b, c in zip(combes.values, cor1.values)))

# %% example 5: the bound first improves, then degrades
curve = sweep(ScenarioSpec("example5", 100), 100, 5000, 10)[0]
print("example 5 minimum:", find_min(curve))

# %% example 6: where the bound stops being informative
curve = sweep(ScenarioSpec("example6", 100), 100, 10000, 25)[0]
print("example 6 crosses 0.5 at n =", find_crossing(curve, 0.5))
