"""A fan in Z^4 with three cones that cannot be completed on its own rays."""

from itertools import combinations

from torpure.completion import completable_without_new_rays, facet_obstructions
from torpure.fans import Cone, Fan, FanMatrix, is_complete, is_fan, unpaired_ridges
from torpure.linalg import det

V = FanMatrix.from_rows([
    [1, 0, 0, 0, 0, -1, 1],
    [0, 1, 0, 0, -1, -1, 2],
    [0, 0, 1, 0, -1, 0, 1],
    [0, 0, 0, 1, -1, -1, 1],
])
F = Fan(V, [(2, 3, 4, 6), (2, 4, 5, 7), (1, 4, 5, 6)])

print("is a fan:", is_fan(F)[0], " complete:", is_complete(F))
print("unpaired ridges:", [tuple(r) for r in unpaired_ridges(F)])

facet = Cone(2, 3, 6)
for c in combinations(range(1, 8), 4):
    if set(facet) < set(c) and det(V.submatrix(c)) == 0:
        print(f"{tuple(c)} is flat, so it cannot close {tuple(facet)}")
for cand, blocker in facet_obstructions(F, facet):
    print(f"{tuple(cand)} would overlap {tuple(blocker)} badly")

print("completion on the same rays:", completable_without_new_rays(F))
