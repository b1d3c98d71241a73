# %% [markdown]
# # Densities of primes with a prescribed primitive root
#
# For a rational r the density is a rational multiple of A.  The multiple
# depends on r through its radical decomposition r = +-r0^e and the
# discriminant of Q(sqrt(r)).

# %%
from fractions import Fraction

from artin_densities import artin_density, decompose, entanglement

for r in (2, 3, 5, -3, 8, -8, 4, -64, Fraction(6, 5)):
    dec = decompose(r)
    ent = entanglement(dec)
    density, verdict = artin_density(r)
    print(f"r = {str(r):>5}: r0 = {str(dec.r0):>4}, e = {dec.e}, h = {dec.h}, disc = {ent.d:>4}"
          f"  ->  delta = {str(density.artin_multiple):>6} * A = {float(density):.6f}  ({verdict.cause})")

# %% [markdown]
# r = 5 is the classic example where the quadratic subfield Q(sqrt 5) lies in
# Q(zeta_5), which pushes the density *above* A by 20/19.
