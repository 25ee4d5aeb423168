"""
Extensions of M by its dual
===========================

For t >= 3 the module M and the twisted dual M^dual(t - mu) have no maps
between them in degree 0, while Ext^1 in degree 0 has dimension
C(t+c-1, c+1).  Each class gives a rank-2 module; over R the cocycle space is
larger, and the A-module classes are cut out by the condition I*E = 0.
"""

from math import comb

from detrep.extengine import ext_M_Mdual, hom_Mdual_M, linear_model
from detrep.extensions import a_module_classes, build_extension, cocycle_space, section3_pair
from detrep.model import DegreeMatrix, hypothesis_check

for t, c, n in [(3, 2, 5), (4, 2, 6)]:
    m = linear_model(t, c, n)
    mu = t - m.dm.mu
    print(f"(t,c,n)=({t},{c},{n}) twist {mu}: ext1 =", ext_M_Mdual(m, 1, 1, mu),
          "expected", comb(t + c - 1, c + 1), " hom both ways:", ext_M_Mdual(m, 1, 0, mu), hom_Mdual_M(m, mu))
    print("   hypotheses:", hypothesis_check(m.dm, n).verdict)

m = linear_model(3, 2, 5)
sub, quot = section3_pair(m)
space = cocycle_space(quot, sub)
classes = a_module_classes(space, m)
print("\nR-level classes:", space.dim, " A-module classes:", len(classes))
E = build_extension(sub, [quot], classes[:1], m, space)
print("rank-2 module: generators", E.assembled.num_generators(), " killed by I:", E.is_A_module)

print("\na non-linear degree matrix:", hypothesis_check(DegreeMatrix(3, 2, [0, 0, 0], [2, 2, 2, 2]), 5).verdict)
