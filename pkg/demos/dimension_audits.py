"""
Dimension counts for four classical configurations
==================================================

For each configuration with a list of high-multiplicity points, compare the
tangent dimension of its realization space plus the number of points with the
dimension of the relevant hypersimplex face count. Every one of them breaks
the naive inequality.
"""

import time

from arrlimit import fixtures
from arrlimit.matroid import aff_cohomology, central_decomposition, dimension_audit, is_unimodular

for name in ["brianchon_pascal", "hesse_dual", "fano_f2", "octahedron_planes_4_8"]:
    C, I = fixtures.load(name)
    t = time.perf_counter()
    a = dimension_audit(C, I)
    print(f"{name:24s} r={C.r} n={C.n} points={len(I):2d} "
          f"dim={a.dim_XC} lhs={a.lhs} rhs={a.rhs} violates={a.violates} ({time.perf_counter() - t:.2f}s)")

###############################################################################
# The same point lists give central decompositions. Their affine cohomology
# vanishes.

for name in ["fano_f2", "octahedron_planes_4_8"]:
    C, I = fixtures.load(name)
    D = central_decomposition(I, C.r, C.n)
    print(name, len(D.polytopes), "pieces, unimodular:", is_unimodular(D), "h1 =", aff_cohomology(D).h1)
