"""
Norm vectors against the tropical row space
===========================================

Every integer point of a window is tested twice: by the circuit condition
and by building the lattice it should come from. The two answers agree.
"""

import numpy as np

from arrlimit import fixtures
from arrlimit.tropical import accepted_graph_is_tree, circuits, trop_membership, verify_correspondence, window_vectors

F = fixtures.example_1_19()
rep = verify_correspondence(F, window=3)
print(f"checked {rep.checked}, passed {rep.passed}, accepted {rep.accepted}")

###############################################################################
# The accepted points near the origin.

C = circuits(F)
W = window_vectors(F.n, 1)
acc = np.array([w for w in W if trop_membership(tuple(int(x) for x in w), C)])
print(acc)

###############################################################################
# A pencil of four points on a line: the accepted points form a tree.

G = fixtures.octahedron_2_4()
print(verify_correspondence(G, window=3).ok, accepted_graph_is_tree(G, 3))
