"""Seeded random inputs shared by the test modules."""

from __future__ import annotations

import random

from arrlimit.building import Lattice, LatticeClass
from arrlimit.membrane import Arrangement
from arrlimit.scalar import QQ, MatrixK, ScalarK, rank


def random_entry(rng: random.Random, lo: int = -2, hi: int = 2) -> ScalarK:
    """a*z^e + b*z^f with small integer coefficients."""
    a, b = rng.randint(-3, 3), rng.randint(-3, 3)
    e, f = rng.randint(lo, hi), rng.randint(lo, hi)
    terms = {e: a}
    terms[f] = terms.get(f, 0) + b
    return ScalarK.from_laurent(terms, QQ)


def random_arrangement(rng: random.Random, r: int, n: int, general: bool = True) -> Arrangement:
    """n vectors in K^r, coefficient valuations in [-2, 2].

    With ``general`` the draw is repeated until every r of them are independent.
    """
    while True:
        vs = [tuple(random_entry(rng) for _ in range(r)) for _ in range(n)]
        if any(all(x.is_zero() for x in v) for v in vs):
            continue
        F = Arrangement(r, tuple(vs), QQ)
        if rank(MatrixK.from_columns(list(F.vectors), QQ)) < r:
            continue
        if not general or not F.dependent_subsets():
            return F


def arrangement_suite(seed: int, count: int, shapes: list[tuple[int, int]]) -> list[Arrangement]:
    rng = random.Random(seed)
    return [random_arrangement(rng, *shapes[k % len(shapes)]) for k in range(count)]


def random_class(rng: random.Random, r: int, lo: int = -3, hi: int = 3) -> LatticeClass:
    """Class of the lattice spanned by columns c*z^e (c in -2..2, e in [lo, hi])."""
    while True:
        cols = [tuple(ScalarK.from_laurent({rng.randint(lo, hi): rng.randint(-2, 2)}, QQ)
                      for _ in range(r)) for _ in range(r)]
        if rank(MatrixK.from_columns(cols, QQ)) == r:
            return Lattice.from_generators(cols, QQ).cls()


def brute_force_hull(classes: list[LatticeClass], start: int = 2) -> set:
    """Keys of [Σ z^{a_α} M_α] for a in a window, widened until stable twice."""
    reps = [c.rep for c in classes]

    def window(W: int) -> set:
        # concrete partial sums, deduplicated after each summand
        partial = {reps[0]}
        for M in reps[1:]:
            shifted = [M.scale(a) for a in range(-W, W + 1)]
            partial = {L + S for L in partial for S in shifted}
        return {L.cls().key for L in partial}

    W = start
    prev = window(W)
    stable = 0
    while stable < 2:
        W += 1
        cur = window(W)
        stable = stable + 1 if cur == prev else 0
        prev = cur
    return prev
