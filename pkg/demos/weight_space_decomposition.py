"""Walk through the weight-space structure of a three-site model.

The tensor product of highest-weight modules splits into subspaces V_m of
fixed spin deviation m (total number of lowering operators applied to the
vacuum).  While m stays below every site weight the dimension is the
stars-and-bars count C(N+m-1, m); beyond that the finite site modules
truncate the occupations and the count drops.
"""

from fractions import Fraction

from gaudin import (
    ModelSpec,
    enumerate_weight_space,
    weight_space_dimension_formula,
)

spec = ModelSpec(weights=(2, 1, 3), z=(Fraction(0), Fraction(1), Fraction(3, 2)))
print(f"weights = {spec.weights}, z = {tuple(str(x) for x in spec.z)}")
print(f"total weight = {spec.total_weight}, min weight = {spec.min_weight}")
print()

print(" m   dim V_m   C(N+m-1,m)   truncated?")
for m in range(spec.total_weight + 1):
    space = enumerate_weight_space(spec, m)
    binom = weight_space_dimension_formula(spec.n_sites, m)
    marker = "yes" if space.dim < binom else ""
    print(f"{m:2d}   {space.dim:7d}   {binom:10d}   {marker}")

print()
m = 2
space = enumerate_weight_space(spec, m)
print(f"basis states of V_{m} (occupation vectors, lex order):")
for state in space.states:
    print("  ", state)
