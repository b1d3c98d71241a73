# %% [markdown]
# # The inclusion-exclusion series
#
# Summing mu(n)/[F_n : Q] over squarefree n gives the density directly, with
# F_n the splitting field of x^n - r over Q(zeta_n).  Truncating at a cutoff
# and bounding the tail gives a rigorous interval that must contain the
# closed-form value.

# %%
from artin_densities import artin_density, inclusion_exclusion_density
from artin_densities.problem import artin_constant_float

A = artin_constant_float()
for r in (2, 3, 5, 6, -2):
    target = float(artin_density(r)[0].artin_multiple) * A
    print(f"r = {r}  (closed form {target:.6f})")
    for cutoff in (10**2, 10**3, 10**4):
        box = inclusion_exclusion_density(r, cutoff)
        print(f"  n <= {cutoff:>5}: [{float(box.lo):.6f}, {float(box.hi):.6f}]  width {float(box.width):.1e}")
