"""
A five-line degeneration with two stable lattices
=================================================

Five lines in the plane over K = Q((z)). Three of them stay in a pencil
through the whole family, and one coefficient degenerates like z^-1.
"""

import numpy as np

from arrlimit import fixtures
from arrlimit.matroid import decomposition_from_limits, is_unimodular, verify_tiling
from arrlimit.membrane import limit_configuration, psi, stable_lattices
from arrlimit.specialfiber import limit_surface

F = fixtures.example_1_19()
print("vectors:")
for v in F.vectors:
    print("   ", [str(x) for x in v])

###############################################################################
# Stable lattices and their norm vectors, normalized so the first entry is 0.

S = stable_lattices(F)
P = np.array([psi(F, M) for M in S])
print(len(S), "stable lattices")
print(P)

###############################################################################
# Each lattice has a limit configuration over Q: the residues of the five
# vectors. Triple points are where the components get blown up.

for M in S:
    C = limit_configuration(F, M)
    print(C.covectors, "triple points:", [I for _, I in C.points(3)])

###############################################################################
# The special fiber: one plain P^2 and one P^2 blown up at a point.

surf = limit_surface(F)
for c in surf.components:
    print(c.kind, "blown up at", c.blowup_points, "inherited", c.inherited_points)
print("glued along", [e.curves for e in surf.edges])

###############################################################################
# The matching tiling of the hypersimplex.

D = decomposition_from_limits(F)
for Q in D.polytopes:
    own, inherited = D.split_inequalities(Q)
    print("piece with", own, "volume", Q.normalized_volume())
print("tiles:", verify_tiling(D), "unimodular:", is_unimodular(D))
