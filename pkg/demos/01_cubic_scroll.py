"""
The cubic scroll in P^4
=======================

A general 2x3 matrix of linear forms in five variables cuts out a surface of
degree 3.  We build its resolutions, measure Ext between the two rank-one
Ulrich modules, and glue a rank-2 Ulrich module out of the single class.
"""

from detrep.complexes import build_C, build_D, sampled_exactness
from detrep.extengine import chi_oracle, ext_L2_L1, hom_L1_L2, linear_model
from detrep.extensions import cocycle_space, extension_of_rank, ulrich_check, ulrich_pair
from detrep.model import invariants

m = linear_model(2, 2, 4, seed=1)
print("invariants:", invariants(m))

# the Eagon-Northcott complex D_0 resolves the coordinate ring
d0 = build_D(m, 0)
print("D_0 ranks", d0.ranks(), "exact:", sampled_exactness(d0, (0, 6)).clean)

# L1 = M^dual(1) is resolved by D_-1, L2 = S_2 M by C_2
print("D_-1 ranks", build_D(m, -1).ranks(), " C_2 ranks", build_C(m, 2).ranks())

print("Hom(L1, L2) =", hom_L1_L2(m))
print("Ext^i(L2, L1), i = 0, 1, 2:", [ext_L2_L1(m, i, 0) for i in (0, 1, 2)])
print("chi at nu = 0, -1, -2:", [chi_oracle(m, nu) for nu in (0, -1, -2)])

# over R there are many more degree-0 extension classes; only one gives an A-module
sub, quot = ulrich_pair(m)
print("R-level classes:", cocycle_space(quot, sub).dim)

E = extension_of_rank(m, 2)
print("rank-2 extension:", ulrich_check(E, m))

try:
    extension_of_rank(m, 3)
except ValueError as exc:
    print("rank 3:", exc)
