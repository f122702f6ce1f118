"""Seeded Monte Carlo check of two example bounds.

The estimate comes with an exact binomial interval; a bound is flagged only
when the whole interval lies above it.
"""
from distbounds.montecarlo import estimate_tail, verify
from distbounds.scenarios import ScenarioSpec, scenario_bound

for spec in (ScenarioSpec("example3", 10, t=0.5), ScenarioSpec("example4", 100, t=25.0)):
    bound = scenario_bound(spec)
    est = estimate_tail(spec, N=100_000, seed=20240229, alpha=0.001, workers=4)
    verdict = verify(bound, est)
    print(
        f"{spec.kind}: bound {bound.clamped:.5f}, estimate {est.point:.5f} "
        f"[{est.ci_low:.5f}, {est.ci_high:.5f}] -> {verdict.status}"
    )

# %% the hit count does not depend on the number of workers
spec = ScenarioSpec("example3", 10)
print({w: estimate_tail(spec, N=50_000, seed=1, workers=w).hits for w in (1, 2, 8)})
