"""
Convex hulls of diagonal lattice classes
========================================

Inside one apartment a lattice class is an exponent vector up to adding a
constant. Sums of lattices take coordinatewise minima, so the hull of a few
classes is their min-plus span. We compare the two with numpy.
"""

import itertools

import numpy as np

from arrlimit.building import Lattice, convex_hull, is_convex
from arrlimit.scalar import QQ, ScalarK


def diagonal(e):
    r = len(e)
    cols = [tuple(ScalarK.from_laurent({e[i]: 1}, QQ) if i == j else ScalarK.from_laurent({}, QQ)
                  for i in range(r)) for j in range(r)]
    return Lattice.from_generators(cols, QQ).cls()


def exponents(c):
    d = np.array([c.rep.matrix[i, i].val() for i in range(c.r)])
    return tuple(d - d.min())


corners = np.array([[0, 0, 0], [3, 1, 0], [1, 0, 2]])
hull = convex_hull([diagonal(tuple(int(x) for x in c)) for c in corners])
print(len(hull), "classes, convex:", is_convex(hull))

###############################################################################
# The min-plus span, enumerated over a box of shifts.

span = set()
for s in itertools.product(range(-4, 5), repeat=2):
    e = (corners + np.array((0,) + s)[:, None]).min(axis=0)
    span.add(tuple(e - e.min()))
print(sorted(span) == sorted(exponents(c) for c in hull))
print(np.array(sorted(span)))
