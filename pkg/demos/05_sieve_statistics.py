# %% [markdown]
# # Counting primes
#
# The predicted densities are conditional on the Riemann hypothesis for
# Kummer extensions, so the only desk check is statistical: sieve primes up
# to a bound, compute the index of r mod q for each, and compare.

# %%
import time

from artin_densities import generic_density
from artin_densities.problem import ProblemSpec
from artin_densities.sieve_verify import SieveConfig, run_experiment

config = SieveConfig(bound=2 * 10**6)
for spec in (ProblemSpec(2), ProblemSpec(5), ProblemSpec(2, 3, 4), ProblemSpec(2, None, None, 2),
             ProblemSpec(2, 1, 4, 4), ProblemSpec(5, 1, 5)):
    t0 = time.perf_counter()
    rep = run_experiment(spec, config, predicted=float(generic_density(spec)[0]))
    print(f"{str(spec.as_dict()):<42} observed {rep.observed:.5f}  predicted {rep.predicted:.5f}"
          f"  z = {rep.z_score:+.2f}  ({time.perf_counter() - t0:.1f}s)")
