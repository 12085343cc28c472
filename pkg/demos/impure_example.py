"""Five rays in Z^3, two complete fans on the same rays, one pure and one not.

Run with ``python demos/impure_example.py``.
"""

from torpure.fans import Fan, FanMatrix, enumerate_complete_fans, m_sigma, multiplicity
from torpure.toric import cartier_lattice, cf_decomposition, class_group, is_pure, picard_subgroup

V = FanMatrix.from_rows([
    [1, -1, 2, -3, -1],
    [1, -1, -1, 2, -1],
    [2, 2, 2, 2, -10],
])

cf = cf_decomposition(V)
print("torsion-free part has rows", cf.Vhat.rows())
print("|det beta| =", cf.det_beta)

cg = class_group(V)
print("class group: rank", cg.r, "torsion", cg.torsion_orders)

# every complete simplicial fan on the torsion-free rays
for fan in enumerate_complete_fans(cf.Vhat):
    mults = [multiplicity(cf.Vhat, c) for c in fan.cones]
    print("\nfan", [tuple(c) for c in fan.cones])
    print("  multiplicities", mults, "gcd", m_sigma(fan))

    F = Fan(V, fan.cones)
    print("  Cartier lattice", cartier_lattice(V, F))
    print("  Pic generated by", ", ".join(map(str, picard_subgroup(V, F, cg))))
    report = is_pure(V, F)
    print("  verdict:", report.verdict, "via", report.via)
