# %% [markdown]
# # The Artin constant
#
# A = prod_p (1 - 1/(p(p-1))) converges slowly: the tail after x behaves like
# 1/x, so multiplying primes up to 10^7 only pins down about seven digits.
# The library evaluates A from a rapidly converging series instead, and keeps
# the slow product around as an independent enclosure.

# %%
import time

from artin_densities import artin_constant
from artin_densities.problem import artin_constant_bounds

for digits in (3, 7, 10):
    print(f"{digits:>2} digits: {artin_constant(digits)}")

# %% the brute-force product brackets the series value
for x in (10**3, 10**5, 10**7):
    t0 = time.perf_counter()
    lo, hi = artin_constant_bounds(x)
    print(f"primes <= {x:>8}: {lo:.10f} <= A <= {hi:.10f}   ({time.perf_counter() - t0:.2f}s)")
