"""Tropicalization of the row space of F and its comparison with the membrane.

Membership in the tropical linear space is decided by circuits: for every
linear relation Σ c_i f_i = 0 of minimal support, min(val c_i + w_i) must
be attained at least twice.  ``verify_correspondence`` compares this oracle
with the lattices Λ_w = Σ R z^{-w_i} f_i over a window of integer vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .building import Lattice, LatticeClass, incident
from .membrane import Arrangement, in_membrane, norm_vector
from .scalar import INF, ScalarK, nullspace, rank, solve_many

BIG = 10 ** 9


# ---------------------------------------------------------------------------
# Plücker valuations


@dataclass(frozen=True)
class TropicalPluecker:
    r: int
    n: int
    values: dict

    def __getitem__(self, I: Sequence[int]):
        return self.values[tuple(sorted(I))]

    def to_json(self) -> dict:
        return {"r": self.r, "n": self.n,
                "values": {",".join(str(i + 1) for i in I): ("inf" if v == INF else int(v))
                           for I, v in sorted(self.values.items())}}


def pluecker_valuations(F: Arrangement) -> TropicalPluecker:
    vals = {T: F.minor(T).val() for T in combinations(range(F.n), F.r)}
    return TropicalPluecker(F.r, F.n, vals)


def pluecker_violations(P: TropicalPluecker) -> list[tuple]:
    """Three-term relations whose minimum is attained only once."""
    bad = []
    for S in combinations(range(P.n), P.r - 2):
        rest = [i for i in range(P.n) if i not in S]
        for a, b, c, d in combinations(rest, 4):
            terms = [P[S + (a, b)] + P[S + (c, d)], P[S + (a, c)] + P[S + (b, d)],
                     P[S + (a, d)] + P[S + (b, c)]]
            m = min(terms)
            if m != INF and terms.count(m) < 2:
                bad.append((S, (a, b, c, d)))
    return bad


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class Circuit:
    support: tuple[int, ...]
    coeffs: tuple[ScalarK, ...]

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(int(c.val()) for c in self.coeffs)

    def to_json(self) -> dict:
        return {"support": [i + 1 for i in self.support],
                "coefficients": [str(c) for c in self.coeffs],
                "valuations": list(self.valuations)}


@dataclass
class CircuitSet:
    n: int
    circuits: list[Circuit] = dc_field(default_factory=list)

    def __len__(self) -> int:
        return len(self.circuits)

    def __iter__(self):
        return iter(self.circuits)

    def supports(self) -> list[tuple[int, ...]]:
        return [c.support for c in self.circuits]


def circuits(F: Arrangement) -> CircuitSet:
    """One relation per minimal dependent subset, scaled so its first coefficient is 1."""
    out = CircuitSet(F.n)
    for k in range(2, F.r + 2):
        for S in combinations(range(F.n), k):
            A = F.columns(S)
            if rank(A) != k - 1:
                continue
            ker = nullspace(A)
            if len(ker) != 1 or any(x.is_zero() for x in ker[0]):
                continue
            c0 = ker[0][0]
            out.circuits.append(Circuit(S, tuple(x / c0 for x in ker[0])))
    return out


def trop_membership(w: Sequence[int], C: CircuitSet) -> bool:
    for c in C:
        terms = [v + w[i] for v, i in zip(c.valuations, c.support)]
        if terms.count(min(terms)) < 2:
            return False
    return True


def _membership_many(W: np.ndarray, C: CircuitSet) -> np.ndarray:
    ok = np.ones(len(W), dtype=bool)
    for c in C:
        terms = W[:, list(c.support)] + np.array(c.valuations)
        m = terms.min(axis=1, keepdims=True)
        ok &= (terms == m).sum(axis=1) >= 2
    return ok


# ---------------------------------------------------------------------------
# correspondence


def witness_lattice(F: Arrangement, w: Sequence[int]) -> Lattice:
    """Λ_w = Σ R z^{-w_i} f_i."""
    return Lattice.from_generators(
        [tuple(F.field.z(-wi) * x for x in f) for wi, f in zip(w, F.vectors)], F.field)


def realizes(F: Arrangement, w: Sequence[int]) -> bool:
    """Ψ(Λ_w) = w exactly (no normalization)."""
    return norm_vector(F, witness_lattice(F, w)) == tuple(w)


def _realized_many(F: Arrangement, W: np.ndarray) -> np.ndarray:
    # Λ_w is spanned mod z by the generators z^{-w_t} f_t of some basis T, so
    # Ψ(Λ_w) = w iff for some T every f_j has T-norm min_t(val c_jt + w_t) = w_j
    ok = np.zeros(len(W), dtype=bool)
    for T in combinations(range(F.n), F.r):
        if not F.independent(T):
            continue
        sols = solve_many(F.columns(T), list(F.vectors))
        V = np.array([[BIG if c.is_zero() else int(c.val()) for c in s] for s in sols])
        good = np.ones(len(W), dtype=bool)
        WT = W[:, list(T)]
        for j in range(F.n):
            good &= (WT + V[j]).min(axis=1) == W[:, j]
        ok |= good
    return ok


@dataclass
class CorrespondenceReport:
    checked: int
    passed: int
    failed: int
    accepted: int
    witnesses: list[dict]

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {"checked": self.checked, "passed": self.passed, "failed": self.failed,
                "accepted": self.accepted, "ok": self.ok, "witnesses": self.witnesses}


def window_vectors(n: int, window: int) -> np.ndarray:
    """Integer vectors with w_1 = 0 and the rest in [-window, window]."""
    rng = range(-window, window + 1)
    return np.array([(0,) + t for t in product(rng, repeat=n - 1)], dtype=np.int64)


def verify_correspondence(F: Arrangement, window: int = 2, exhaustive: bool = False,
                          max_witnesses: int = 20) -> CorrespondenceReport:
    """Compare the circuit oracle with realizability by Λ_w over the window.

    With ``exhaustive`` every Λ_w is built by Hermite reduction; otherwise
    the basis criterion above is used and accepted points are confirmed by
    Hermite reduction, together with membrane membership and uniqueness.
    """
    W = window_vectors(F.n, window)
    C = circuits(F)
    trop = _membership_many(W, C)
    if exhaustive:
        real = np.array([realizes(F, tuple(int(x) for x in w)) for w in W], dtype=bool)
    else:
        real = _realized_many(F, W)
    witnesses: list[dict] = []
    bad = np.nonzero(trop != real)[0]
    for k in bad[:max_witnesses]:
        witnesses.append({"w": [int(x) for x in W[k]], "tropical": bool(trop[k]),
                          "realized": bool(real[k])})
    failed = len(bad)
    for k in np.nonzero(trop & real)[0]:
        w = tuple(int(x) for x in W[k])
        L = witness_lattice(F, w)
        if (not exhaustive and norm_vector(F, L) != w) or not in_membrane(F, L):
            failed += 1
            if len(witnesses) < max_witnesses:
                witnesses.append({"w": list(w), "tropical": True, "realized": False,
                                  "reason": "hermite_check"})
    return CorrespondenceReport(len(W), len(W) - failed, failed, int(trop.sum()), witnesses)


def accepted_classes(F: Arrangement, window: int) -> list[tuple[tuple[int, ...], LatticeClass]]:
    W = window_vectors(F.n, window)
    keep = _membership_many(W, circuits(F))
    out = []
    for w in W[keep]:
        w = tuple(int(x) for x in w)
        out.append((w, witness_lattice(F, w).cls()))
    return out


def accepted_graph_is_tree(F: Arrangement, window: int) -> bool:
    """For r = 2: accepted classes with building edges form a connected acyclic graph."""
    pts = accepted_classes(F, window)
    n = len(pts)
    if n == 0:
        return True
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = 0
    for a, b in combinations(range(n), 2):
        if pts[a][1] != pts[b][1] and incident(pts[a][1], pts[b][1]):
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
            edges += 1
    return edges == n - 1
