"""
Measured Ext against the closed form
====================================

For d = 2 or t <= 3 the closed form for chi is an equality.  We measure
ext^0, ext^1, ext^2 from the dualized resolution of S_{2c}M and compare,
then look at hypersurfaces, curves, and one case with t = 4 where only an
inequality is claimed.
"""

from detrep.extengine import chi_oracle, ext_L2_L1, linear_model, t3_gap
from detrep.formulas import chi_bound, curve_chi, ext1_c1

for t, c, n in [(2, 2, 4), (2, 3, 5), (3, 2, 4), (3, 2, 5), (3, 3, 5)]:
    m = linear_model(t, c, n)
    got = [chi_oracle(m, nu) for nu in (0, -1, -2)]
    want = [chi_bound(t, c, n - c, nu) for nu in (0, -1, -2)]
    print(f"(t,c,n)=({t},{c},{n})  measured {got}  formula {want}")

m = linear_model(2, 3, 5)
print("\nquartic scroll ext^i:", [ext_L2_L1(m, i, 0) for i in (0, 1, 2)])

print("\nhypersurfaces: measured vs C(t,2)(n+1) - t^2")
for t, n in [(2, 6), (2, 8), (3, 3), (3, 4)]:
    print("  ", (t, n), ext_L2_L1(linear_model(t, 1, n), 1, 0), ext1_c1(t, n))

print("\ncurves: measured ext^1 vs -chi from Riemann-Roch")
for t, n in [(3, 3), (3, 4), (4, 3)]:
    print("  ", (t, n), ext_L2_L1(linear_model(t, n - 1, n), 1, 0), -curve_chi(t, n)[0])

m = linear_model(4, 2, 5)
print("\nt=4, c=2, d=3:", [chi_oracle(m, nu) for nu in (0, -1, -2)], "bound",
      [chi_bound(4, 2, 3, nu) for nu in (0, -1, -2)])
print("hyperplane-recursion gap at nu=0:", t3_gap(m, 0))
