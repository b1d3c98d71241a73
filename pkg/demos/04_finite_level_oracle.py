# %% [markdown]
# # The finite-level oracle
#
# Every density above can be recomputed without any closed form: enumerate the
# affine group (Z/N) x| (Z/N)^* at a suitable level N, count the local
# conditions prime by prime and average the quadratic character over them.
# This also handles the combined problem (index t *and* progression), which
# has no closed form.

# %%
from artin_densities import densities, finite_model
from artin_densities.problem import ProblemSpec

spec = ProblemSpec(5)
res = finite_model.evaluate(spec)
print(f"level N = {res.level}")
for loc in res.locals:
    print(f"  p = {loc.p}: nu_p = {loc.nu}, E_p = {loc.E}  (count {loc.count} at level {loc.level})")
print(f"E = 1 + prod E_p = {res.correction},  delta = {res.density.artin_multiple} * A")

# %% the oracle and the closed forms agree exactly
for spec in (ProblemSpec(2, 3, 4), ProblemSpec(-4, None, None, 2), ProblemSpec(-64, 5, 12)):
    print(spec.kind, spec.as_dict(), densities.closed_form(spec)[0] == finite_model.delta_exact(spec))

# %% a combined problem
spec = ProblemSpec(2, 1, 4, 4)
print("r = 2, t = 4, q = 1 mod 4:", finite_model.delta_exact(spec).artin_multiple, "* A")

# %% the image of Galois has index two in the level group
lg = finite_model.build_level(ProblemSpec(5))
info = finite_model.galois_kernel(lg)
print(f"level {lg.N}: {info.size} of {info.order} elements")
