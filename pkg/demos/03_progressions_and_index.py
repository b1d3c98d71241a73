# %% [markdown]
# # Primitive roots in progressions, and near-primitive roots
#
# Two refinements: ask that q = a mod f as well, or that r generate a subgroup
# of exact index t.  Some of these densities vanish for structural reasons
# and the verdict names the reason.

# %%
import math

from artin_densities import ap_density, near_density

print("r = 2, q = a mod 8")
for a in range(8):
    if math.gcd(a, 8) == 1:
        d, v = ap_density(2, a, 8)
        print(f"  a = {a}: {str(d.artin_multiple):>5} * A   {v.cause}")

# %%
print("\nr = 27 in residue classes mod 4 (27 = 3^3 and -3 * 27 is a square)")
for a in (1, 3):
    d, v = ap_density(27, a, 4)
    print(f"  a = {a}: {str(d.artin_multiple):>5} * A   {v.cause}")

# %%
print("\nindex t for r = 2, -4, 5")
for r in (2, -4, 5):
    row = []
    for t in range(1, 9):
        d, v = near_density(r, t)
        row.append(f"{str(d.artin_multiple):>7}")
    print(f"  r = {r:>2}: " + " ".join(row))
