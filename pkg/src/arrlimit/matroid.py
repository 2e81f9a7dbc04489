"""Matroids, matroid polytopes and decompositions of the hypersimplex.

Also hosts the configuration-level tools built on them: central
decompositions, lax orders, affine cochain cohomology of a decomposition,
cross-ratios, and tangent-space dimension audits.

Ground sets are 0-based internally; bases are bit masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Sequence

import flint

from .config import Configuration
from .errors import (IndeterminateCR, OverlapViolation, RankDeficient, TilingFailure,
                     WitnessInvalid)
from .scalar import INF, QQ, MatrixK, ScalarK, det, kdet, knullspace, krank

# ---------------------------------------------------------------------------
# bit helpers


def popcount(x: int) -> int:
    return bin(x).count("1")


def to_mask(S: Iterable[int]) -> int:
    m = 0
    for i in S:
        m |= 1 << i
    return m


def members(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if mask >> i & 1)


def indicator(mask: int, n: int) -> tuple[int, ...]:
    return tuple(mask >> i & 1 for i in range(n))


# ---------------------------------------------------------------------------
# matroids


@dataclass(frozen=True)
class Matroid:
    """A matroid on {0..n-1} given by its bases."""

    n: int
    r: int
    bases: frozenset
    trusted: bool = dc_field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.bases:
            raise RankDeficient("a matroid needs at least one basis")
        if not self.trusted:
            if any(popcount(B) != self.r or B >> self.n for B in self.bases):
                raise ValueError("basis of the wrong size")
            bad = exchange_violation(self.n, self.bases)
            if bad is not None:
                raise ValueError(f"basis exchange fails for {bad}")

    @classmethod
    def from_sets(cls, n: int, bases: Iterable[Iterable[int]]) -> "Matroid":
        bs = frozenset(to_mask(B) for B in bases)
        r = popcount(next(iter(bs))) if bs else 0
        return cls(n, r, bs)

    @classmethod
    def uniform(cls, r: int, n: int) -> "Matroid":
        return cls(n, r, frozenset(to_mask(B) for B in combinations(range(n), r)), True)

    def rank_of(self, S: Iterable[int] | int) -> int:
        m = S if isinstance(S, int) else to_mask(S)
        return max(popcount(B & m) for B in self.bases)

    def basis_sets(self) -> list[tuple[int, ...]]:
        return sorted(members(B, self.n) for B in self.bases)

    def components(self) -> list[int]:
        return components(self.n, self.bases)

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def dimension(self) -> int:
        """Dimension of the matroid polytope."""
        return self.n - len(self.components())

    def face(self, I: int) -> "Matroid":
        """The face of the polytope maximizing x_I (that is M|I ⊕ M/I)."""
        k = self.rank_of(I)
        return Matroid(self.n, self.r, frozenset(B for B in self.bases if popcount(B & I) == k), True)

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "bases": [[i + 1 for i in B] for B in self.basis_sets()]}


def exchange_violation(n: int, bases: frozenset) -> tuple | None:
    for B1 in bases:
        for B2 in bases:
            d1, d2 = B1 & ~B2, B2 & ~B1
            for x in members(d1, n):
                if not any((B1 ^ (1 << x)) | (1 << y) in bases for y in members(d2, n)):
                    return (members(B1, n), members(B2, n), x)
    return None


def components(n: int, bases: Iterable[int]) -> list[int]:
    """Connected components as masks, ordered by least element."""
    bases = frozenset(bases)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for B in bases:
        for i in members(B, n):
            for j in range(n):
                if not B >> j & 1 and (B ^ (1 << i)) | (1 << j) in bases:
                    parent[find(i)] = find(j)
    comps: dict[int, int] = {}
    for i in range(n):
        comps[find(i)] = comps.get(find(i), 0) | (1 << i)
    return sorted(comps.values(), key=lambda m: (m & -m))


def matroid_of(C: Configuration) -> Matroid:
    """Bases are the r-subsets of covectors with nonzero determinant."""
    bs = frozenset(to_mask(T) for T in combinations(range(C.n), C.r) if C.is_basis(T))
    if not bs:
        raise RankDeficient("configuration has no basis", rank=C.rank())
    return Matroid(C.n, C.r, bs, True)


# ---------------------------------------------------------------------------
# polytopes and volume


def _restrict(bases: Iterable[int], comp: int, n: int) -> tuple[int, tuple[int, ...]]:
    """Bases of the component ``comp`` relabeled onto {0..size-1}."""
    idx = members(comp, n)
    out = set()
    for B in bases:
        m = 0
        for k, i in enumerate(idx):
            if B >> i & 1:
                m |= 1 << k
        out.add(m)
    return len(idx), tuple(sorted(out))


def _volume(n: int, bases: frozenset) -> int:
    comps = components(n, bases)
    dims, vol = [], 1
    for c in comps:
        m, bs = _restrict(bases, c, n)
        dims.append(m - 1)
        vol *= _connected_volume(m, popcount(bs[0]), bs)
    total = sum(dims)
    coef = factorial(total)
    for d in dims:
        coef //= factorial(d)
    return coef * vol


@lru_cache(maxsize=None)
def _connected_volume(m: int, r: int, bases: tuple[int, ...]) -> int:
    # pyramid decomposition from a vertex p over the facets avoiding it;
    # x_I is primitive on the lattice of the span, so heights are integers
    if m == 1:
        return 1
    bs = frozenset(bases)
    p = bases[0]
    seen: set = set()
    total = 0
    for I in range(1, (1 << m) - 1):
        k = max(popcount(B & I) for B in bs)
        h = k - popcount(p & I)
        if h == 0:
            continue
        face = frozenset(B for B in bs if popcount(B & I) == k)
        if face in seen:
            continue
        seen.add(face)
        if len(components(m, face)) != 2:
            continue
        total += h * _volume(m, face)
    return total


@dataclass(frozen=True)
class MatroidPolytope:
    matroid: Matroid

    @property
    def n(self) -> int:
        return self.matroid.n

    @property
    def r(self) -> int:
        return self.matroid.r

    def vertices(self) -> list[tuple[int, ...]]:
        return sorted(indicator(B, self.n) for B in self.matroid.bases)

    def vertex_masks(self) -> frozenset:
        return self.matroid.bases

    def dimension(self) -> int:
        return self.matroid.dimension()

    def facets(self) -> list[tuple[int, int, frozenset]]:
        """Facets as (I mask, rank I, vertex masks) for inequalities x_I <= rank I."""
        M = self.matroid
        target = len(M.components()) + 1
        best: dict[frozenset, tuple[int, int]] = {}
        for I in range(1, (1 << M.n) - 1):
            F = M.face(I)
            if F.bases == M.bases or len(F.components()) != target:
                continue
            key = (popcount(I), I)
            if F.bases not in best or key < (popcount(best[F.bases][0]), best[F.bases][0]):
                best[F.bases] = (I, M.rank_of(I))
        return sorted(((I, k, f) for f, (I, k) in best.items()), key=lambda t: (popcount(t[0]), t[0]))

    def inequalities(self) -> list[tuple[tuple[int, ...], int]]:
        return [(members(I, self.n), k) for I, k, _ in self.facets()]

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.n or sum(x) != self.r or any(not 0 <= v <= 1 for v in x):
            return False
        M = self.matroid
        return all(sum(x[i] for i in members(I, self.n)) <= M.rank_of(I)
                   for I in range(1, 1 << self.n))

    def normalized_volume(self) -> int:
        return _volume(self.n, self.matroid.bases)

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices()],
                "inequalities": [{"I": [i + 1 for i in I], "rhs": k} for I, k in self.inequalities()],
                "normalized_volume": self.normalized_volume()}


def polytope_of(M: Matroid) -> MatroidPolytope:
    return MatroidPolytope(M)


def normalized_volume(P: MatroidPolytope | Matroid) -> int:
    M = P.matroid if isinstance(P, MatroidPolytope) else P
    return _volume(M.n, M.bases)


def hypersimplex(r: int, n: int) -> MatroidPolytope:
    return MatroidPolytope(Matroid.uniform(r, n))


def eulerian(n: int, k: int) -> int:
    """Eulerian number A(n, k): permutations of n with k descents."""
    return sum((-1) ** j * comb(n + 1, j) * (k + 1 - j) ** n for j in range(k + 2))


def polytope_from_inequalities(r: int, n: int, ineqs: Iterable[tuple[Iterable[int], int]]) -> MatroidPolytope:
    """{x ∈ Δ(r,n) : x_I <= k for each (I, k)}; must be a matroid polytope."""
    cons = [(to_mask(I), k) for I, k in ineqs]
    bs = frozenset(B for B in (to_mask(T) for T in combinations(range(n), r))
                   if all(popcount(B & I) <= k for I, k in cons))
    return MatroidPolytope(Matroid(n, r, bs))


# ---------------------------------------------------------------------------
# decompositions


@dataclass
class MatroidDecomposition:
    """Matroid polytopes meant to tile the polytope of ``ambient``.

    ``ambient`` is None for the hypersimplex Δ(r,n).  A degenerate family F
    tiles the polytope of its own matroid over K instead.
    """

    r: int
    n: int
    polytopes: list[MatroidPolytope]
    ambient: Matroid | None = None

    def ambient_matroid(self) -> Matroid:
        return self.ambient if self.ambient is not None else Matroid.uniform(self.r, self.n)

    def adjacency(self) -> list[tuple[int, int]]:
        """Pairs of polytopes sharing a facet."""
        out = []
        facets = [{f for _, _, f in P.facets()} for P in self.polytopes]
        for a, b in combinations(range(len(self.polytopes)), 2):
            if facets[a] & facets[b]:
                out.append((a, b))
        return out

    def split_inequalities(self, P: MatroidPolytope) -> tuple[list, list]:
        """Facet inequalities of P: (own, inherited from the ambient matroid)."""
        A = self.ambient_matroid()
        own, inh = [], []
        for I, k, _ in P.facets():
            (inh if A.rank_of(I) == k else own).append((members(I, self.n), k))
        return own, inh

    def own_polytope(self, P: MatroidPolytope) -> MatroidPolytope | None:
        """{x in Δ(r,n) : own inequalities of P}, if that is a matroid polytope."""
        own, _ = self.split_inequalities(P)
        try:
            return polytope_from_inequalities(self.r, self.n, own)
        except ValueError:
            return None

    def to_json(self) -> dict:
        polys = []
        for P in self.polytopes:
            d = P.to_json()
            own, inh = self.split_inequalities(P)
            d["inequalities"] = [{"I": [i + 1 for i in I], "rhs": k} for I, k in own]
            d["inherited"] = [{"I": [i + 1 for i in I], "rhs": k} for I, k in inh]
            polys.append(d)
        out = {"r": self.r, "n": self.n, "polytopes": polys,
               "adjacency": [[a + 1, b + 1] for a, b in self.adjacency()]}
        if self.ambient is not None:
            out["ambient_nonbases"] = [list(T) for T in _nonbases(self.ambient)]
        return out


def _nonbases(M: Matroid) -> list[tuple[int, ...]]:
    return [tuple(i + 1 for i in T) for T in combinations(range(M.n), M.r) if to_mask(T) not in M.bases]


def _separating_functional(P: frozenset, Q: frozenset, n: int):
    """Exact (ℓ, c) with ℓ·v = c on P ∩ Q, < c on P only, > c on Q only; or None."""
    import numpy as np
    from scipy.optimize import linprog

    common, ponly, qonly = P & Q, P - Q, Q - P
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for B in ponly:
        A_ub.append(list(indicator(B, n)) + [-1])
        b_ub.append(-1)
    for B in qonly:
        A_ub.append([-x for x in indicator(B, n)] + [1])
        b_ub.append(-1)
    for B in common:
        A_eq.append(list(indicator(B, n)) + [-1])
        b_eq.append(0)
    res = linprog(np.zeros(n + 1), A_ub=np.array(A_ub) if A_ub else None,
                  b_ub=np.array(b_ub) if b_ub else None,
                  A_eq=np.array(A_eq) if A_eq else None, b_eq=np.array(b_eq) if b_eq else None,
                  bounds=[(None, None)] * (n + 1), method="highs")
    if res.status != 0:
        return None
    for den in (1, 2, 6, 12, 60, 1000, 10 ** 6):
        sol = [Fraction(float(x)).limit_denominator(den) for x in res.x]
        ell, c = sol[:n], sol[n]

        def val(B: int) -> Fraction:
            return sum((ell[i] for i in members(B, n)), Fraction(0)) - c

        if (all(val(B) == 0 for B in common) and all(val(B) < 0 for B in ponly)
                and all(val(B) > 0 for B in qonly)):
            return ell, c
    return None


def tiling_witness(D: MatroidDecomposition) -> dict | None:
    """None if D tiles its ambient polytope; otherwise a record describing the failure."""
    A = D.ambient_matroid()
    target = A.dimension()
    for k, P in enumerate(D.polytopes):
        if P.n != D.n or P.r != D.r:
            return {"reason": "wrong_ambient", "polytope": k + 1}
        if not P.vertex_masks() <= A.bases:
            return {"reason": "outside_ambient", "polytope": k + 1}
        if P.dimension() != target:
            return {"reason": "not_full_dimensional", "polytope": k + 1}
    total = sum(P.normalized_volume() for P in D.polytopes)
    expected = normalized_volume(A)
    if total != expected:
        return {"reason": "volume_mismatch", "total": total, "expected": expected}
    for a, b in combinations(range(len(D.polytopes)), 2):
        Pa, Pb = D.polytopes[a].vertex_masks(), D.polytopes[b].vertex_masks()
        if Pa == Pb or _separating_functional(Pa, Pb, D.n) is None:
            return {"reason": "improper_intersection", "pair": [a + 1, b + 1]}
    return None


def verify_tiling(D: MatroidDecomposition) -> bool:
    return tiling_witness(D) is None


def _saturated(points: Sequence[Sequence[int]]) -> bool:
    if len(points) < 2:
        return True
    diffs = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    S = flint.fmpz_mat(diffs).snf()
    k = min(S.nrows(), S.ncols())
    return all(abs(int(S[i, i])) <= 1 for i in range(k))


def is_unimodular(D: MatroidDecomposition) -> bool:
    """Vertex-difference lattices of cells, their facets and pairwise overlaps are saturated."""
    n = D.n
    faces: set[frozenset] = set()
    for P in D.polytopes:
        faces.add(P.vertex_masks())
        faces.update(f for _, _, f in P.facets())
    for P, Q in combinations(D.polytopes, 2):
        c = P.vertex_masks() & Q.vertex_masks()
        if c:
            faces.add(frozenset(c))
    return all(_saturated([indicator(B, n) for B in sorted(f)]) for f in faces)


def family_matroid(F) -> Matroid:
    """Matroid of the vectors of F over K."""
    bs = frozenset(to_mask(T) for T in combinations(range(F.n), F.r) if F.independent(T))
    return Matroid(F.n, F.r, bs, True)


def decomposition_from_limits(F, window: int | None = None) -> MatroidDecomposition:
    """Matroid polytopes of the limit configurations at the GIT-stable classes.

    The pieces tile the polytope of F's own matroid, which is Δ(r,n) when F
    is in general position.
    """
    from .membrane import git_stable_classes, limit_configuration

    classes = git_stable_classes(F, window)
    polys = [MatroidPolytope(matroid_of(limit_configuration(F, L))) for L in classes]
    A = family_matroid(F)
    D = MatroidDecomposition(F.r, F.n, polys, None if len(A.bases) == comb(F.n, F.r) else A)
    bad = tiling_witness(D)
    if bad is not None:
        raise TilingFailure("limit polytopes do not tile the matroid polytope of F", **bad)
    if not is_unimodular(D):
        raise TilingFailure("decomposition is not unimodular", reason="not_unimodular")
    return D


# ---------------------------------------------------------------------------
# central decompositions


def _check_overlaps(I_sets: Sequence[frozenset], r: int) -> None:
    for (a, A), (b, B) in combinations(enumerate(I_sets), 2):
        if len(A & B) > r - 2:
            raise OverlapViolation(f"|I_{a + 1} ∩ I_{b + 1}| = {len(A & B)} exceeds r-2 = {r - 2}",
                                   pair=[a + 1, b + 1])


def central_decomposition(I_list: Sequence[Iterable[int]], r: int, n: int) -> MatroidDecomposition:
    """P_C = {x_{I_a} <= r-1 for all a} followed by P_a = {x_{I_a} >= r-1}."""
    sets = [frozenset(I) for I in I_list]
    if any(len(I) < r for I in sets):
        raise OverlapViolation("each I_a needs at least r elements")
    if any(not all(0 <= i < n for i in I) for I in sets):
        raise ValueError("index out of range")
    _check_overlaps(sets, r)
    masks = [to_mask(I) for I in sets]
    all_b = [to_mask(T) for T in combinations(range(n), r)]
    center = frozenset(B for B in all_b if all(popcount(B & m) <= r - 1 for m in masks))
    polys = [MatroidPolytope(Matroid(n, r, center))]
    for m in masks:
        polys.append(MatroidPolytope(Matroid(n, r, frozenset(B for B in all_b
                                                          if popcount(B & m) >= r - 1))))
    return MatroidDecomposition(r, n, polys)


def coarsenings(I_list: Sequence[Iterable[int]], r: int, n: int) -> list[tuple[tuple[int, ...], MatroidDecomposition]]:
    """Central decompositions for every subset I' of the index sets (by position)."""
    sets = [tuple(sorted(I)) for I in I_list]
    out = []
    for k in range(len(sets) + 1):
        for sub in combinations(range(len(sets)), k):
            out.append((sub, central_decomposition([sets[a] for a in sub], r, n)))
    return out


def overlaps_on_boundary(D: MatroidDecomposition) -> bool:
    """Pairwise overlaps of the non-central pieces lie in the boundary of Δ(r,n)."""
    n = D.n
    for P, Q in combinations(D.polytopes[1:], 2):
        common = P.vertex_masks() & Q.vertex_masks()
        if not common:
            continue
        union = 0
        inter = (1 << n) - 1
        for B in common:
            union |= B
            inter &= B
        # all common vertices share some x_i = 0 or some x_i = 1
        if union == (1 << n) - 1 and inter == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# lax orders


def _high_points(C: Configuration, S: Sequence[int]) -> dict[int, list[tuple]]:
    """For each line in S, the points on it of multiplicity > r within S."""
    sub = Configuration(C.r, tuple(C.covectors[i] for i in S), C.field)
    out: dict[int, list[tuple]] = {i: [] for i in S}
    for p, inc in sub.points(C.r + 1):
        for k in inc:
            out[S[k]].append(p)
    return out


def _independent(points: list[tuple], C: Configuration) -> bool:
    return not points or krank(points, C.field) == len(points)


def is_lax(C: Configuration, order: Sequence[int]) -> bool:
    """Check the laxness condition for the total order ``order`` (0-based)."""
    order = list(order)
    if sorted(order) != list(range(C.n)):
        raise ValueError("order must be a permutation of the lines")
    for k in range(len(order)):
        pts = _high_points(C, order[: k + 1])[order[k]]
        if not _independent(pts, C):
            return False
    return True


def find_lax_order(C: Configuration) -> list[int] | None:
    """A lax order, found by peeling off admissible last lines; None if none exists.

    The condition on a line only gets weaker as lines are removed, so greedy
    peeling is complete.
    """
    rest = list(range(C.n))
    tail: list[int] = []
    while rest:
        hp = _high_points(C, rest)
        pick = next((i for i in reversed(rest) if _independent(hp[i], C)), None)
        if pick is None:
            return None
        rest.remove(pick)
        tail.append(pick)
    return tail[::-1]


# ---------------------------------------------------------------------------
# affine cochain complex


class _Cell:
    """A polytope given by integer vertices, with its facets as vertex-index sets."""

    def __init__(self, vertices: Sequence[Sequence[int]], facets: Iterable[frozenset] | None = None):
        self.vertices = [tuple(int(x) for x in v) for v in vertices]
        self.dim = _affine_rank(self.vertices)
        self._facets = list(facets) if facets is not None else None

    def facets(self) -> list[frozenset]:
        if self._facets is None:
            self._facets = _brute_facets(self.vertices, self.dim)
        return self._facets


def _affine_rank(pts: Sequence[Sequence]) -> int:
    if len(pts) <= 1:
        return 0
    return flint.fmpz_mat([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]).rank()


def _brute_facets(pts: list[tuple], d: int) -> list[frozenset]:
    """Facets of conv(pts) by exact enumeration over affinely spanning subsets."""
    if d == 0:
        return []
    lifted = [list(p) + [1] for p in pts]
    found: set[frozenset] = set()
    for S in combinations(range(len(pts)), d):
        if _affine_rank([pts[i] for i in S]) != d - 1:
            continue
        # functionals vanishing on S; modulo those vanishing on all points
        # this space is one-dimensional
        rows = [lifted[i] for i in S]
        ker = knullspace(rows, QQ, len(rows[0]))
        cand = None
        for g in ker:
            vals = [sum((a * b for a, b in zip(g, p)), flint.fmpq(0)) for p in lifted]
            if any(v != 0 for v in vals):
                cand = vals
                break
        if cand is None:
            continue
        pos = any(v > 0 for v in cand)
        neg = any(v < 0 for v in cand)
        if pos and neg:
            continue
        found.add(frozenset(i for i, v in enumerate(cand) if v == 0))
    return sorted(found, key=sorted)


@dataclass
class PolyhedralDecomposition:
    """Cells with integer vertices tiling an ambient polytope."""

    cells: list[_Cell]
    ambient_facets: list[Sequence[Sequence[int]]]   # vertex lists of the ambient facets

    @classmethod
    def from_vertex_lists(cls, cells: Sequence[Sequence[Sequence[int]]],
                          ambient: Sequence[Sequence[int]]) -> "PolyhedralDecomposition":
        amb = _Cell(ambient)
        return cls([_Cell(c) for c in cells], [[amb.vertices[i] for i in f] for f in amb.facets()])

    @classmethod
    def from_matroid(cls, D: MatroidDecomposition) -> "PolyhedralDecomposition":
        n = D.n
        cells = []
        for P in D.polytopes:
            masks = sorted(P.vertex_masks())
            pos = {B: k for k, B in enumerate(masks)}
            cells.append(_Cell([indicator(B, n) for B in masks],
                               [frozenset(pos[B] for B in f) for _, _, f in P.facets()]))
        amb = MatroidPolytope(D.ambient_matroid())
        return cls(cells, [[indicator(B, n) for B in f] for _, _, f in amb.facets()])

    def in_boundary(self, face: frozenset) -> bool:
        return any(face <= frozenset(f) for f in self.ambient_facets)


def _aff_basis(pts: list[tuple]) -> flint.fmpz_mat:
    """Rows: a Z-basis of the restrictions of x_1..x_n and 1 to ``pts``."""
    n = len(pts[0])
    rows = [[p[i] for p in pts] for i in range(n)] + [[1] * len(pts)]
    H = flint.fmpz_mat(rows).hnf().tolist()
    return flint.fmpz_mat([row for row in H if any(x != 0 for x in row)])


def _coords(basis: flint.fmpz_mat, y: list[int]) -> list[int]:
    """Integer coordinates of y in the row basis."""
    k = basis.nrows()
    sol = flint.fmpq_mat(basis.transpose()).solve(flint.fmpq_mat(len(y), 1, y)) if k == len(y) else None
    if sol is None:
        # full column rank system: pick independent columns
        cols = []
        B = basis.tolist()
        for j in range(len(y)):
            trial = cols + [j]
            if flint.fmpq_mat([[B[i][c] for c in trial] for i in range(k)]).rank() == len(trial):
                cols = trial
            if len(cols) == k:
                break
        A = flint.fmpq_mat([[B[i][c] for i in range(k)] for c in cols])
        sol = A.solve(flint.fmpq_mat(k, 1, [y[c] for c in cols]))
    out = []
    for i in range(k):
        q = sol[i, 0]
        if q.q != 1:
            raise ArithmeticError("restriction is not integral")
        out.append(int(q.p))
    return out


@dataclass(frozen=True)
class AffCohomology:
    h0: int
    h1: int
    torsion: tuple[int, ...]
    sizes: tuple[int, int, int]

    def to_json(self) -> dict:
        return {"h0": self.h0, "h1": self.h1, "torsion": list(self.torsion),
                "cells": list(self.sizes)}


def aff_cohomology(D: MatroidDecomposition | PolyhedralDecomposition) -> AffCohomology:
    """Ranks of H^0 and H^1 of the complex of integral affine functions on cells."""
    PD = PolyhedralDecomposition.from_matroid(D) if isinstance(D, MatroidDecomposition) else D
    cells = PD.cells
    d = max(c.dim for c in cells)
    cell_pts = [frozenset(c.vertices) for c in cells]

    # interior codim-1 faces with their two cells
    walls: dict[frozenset, list[int]] = {}
    for k, c in enumerate(cells):
        for f in c.facets():
            walls.setdefault(frozenset(c.vertices[i] for i in f), []).append(k)
    walls = {f: ks for f, ks in walls.items() if not PD.in_boundary(f)}
    for f, ks in walls.items():
        if len(ks) != 2:
            raise TilingFailure("interior facet not shared by exactly two cells",
                                cells=[k + 1 for k in ks])
    # interior codim-2 faces
    ridges: set[frozenset] = set()
    for c in cells:
        fs = [frozenset(c.vertices[i] for i in f) for f in c.facets()]
        for a, b in combinations(fs, 2):
            e = a & b
            if e and _affine_rank(list(e)) == d - 2 and not PD.in_boundary(e):
                ridges.add(e)

    wall_list = sorted(walls, key=lambda f: sorted(f))
    ridge_list = sorted(ridges, key=lambda f: sorted(f))

    def ordered(face):
        return sorted(face)

    bases0 = [_aff_basis(sorted(p)) for p in cell_pts]
    bases1 = [_aff_basis(ordered(f)) for f in wall_list]
    bases2 = [_aff_basis(ordered(e)) for e in ridge_list]
    off0 = _offsets(bases0)
    off1 = _offsets(bases1)
    off2 = _offsets(bases2)

    def restrict(basis, src_pts, dst_pts, dst_basis) -> list[list[int]]:
        idx = [src_pts.index(p) for p in dst_pts]
        rows = basis.tolist()
        return [_coords(dst_basis, [row[i] for i in idx]) for row in rows]

    # d0
    d0 = [[0] * off0[-1] for _ in range(off1[-1])]
    for w, f in enumerate(wall_list):
        plus, minus = walls[f]
        for sign, k in ((1, plus), (-1, minus)):
            R = restrict(bases0[k], sorted(cell_pts[k]), ordered(f), bases1[w])
            for a, col in enumerate(R):
                for b, v in enumerate(col):
                    d0[off1[w] + b][off0[k] + a] += sign * v
    # d1: signs from walking around each ridge
    d1 = [[0] * off1[-1] for _ in range(off2[-1])]
    for e_i, e in enumerate(ridge_list):
        around = [w for w, f in enumerate(wall_list) if e <= f]
        cyc = _cycle(around, [walls[wall_list[w]] for w in around])
        for w, s in cyc:
            R = restrict(bases1[w], ordered(wall_list[w]), ordered(e), bases2[e_i])
            for a, col in enumerate(R):
                for b, v in enumerate(col):
                    d1[off2[e_i] + b][off1[w] + a] += s * v

    rk0 = _rank(d0, off0[-1])
    rk1 = _rank(d1, off1[-1])
    h0 = off0[-1] - rk0
    h1 = (off1[-1] - rk1) - rk0
    tors: tuple[int, ...] = ()
    if d0 and off0[-1]:
        S = flint.fmpz_mat(d0).snf()
        tors = tuple(int(abs(S[i, i])) for i in range(min(S.nrows(), S.ncols())) if abs(int(S[i, i])) > 1)
    return AffCohomology(h0, h1, tors, (len(cells), len(wall_list), len(ridge_list)))


def _offsets(bases: list) -> list[int]:
    out = [0]
    for B in bases:
        out.append(out[-1] + B.nrows())
    return out


def _rank(rows: list[list[int]], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return flint.fmpz_mat(rows).rank()


def _cycle(walls: list[int], pairs: list[list[int]]) -> list[tuple[int, int]]:
    """Orient the walls around a ridge into a cycle; returns (wall, ±1)."""
    if not walls:
        return []
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for w, (p, m) in zip(walls, pairs):
        adj.setdefault(p, []).append((w, p, m))
        adj.setdefault(m, []).append((w, p, m))
    start = pairs[0][0]
    out, used = [], set()
    cur = start
    while True:
        nxt = next(((w, p, m) for w, p, m in adj[cur] if w not in used), None)
        if nxt is None:
            break
        w, p, m = nxt
        used.add(w)
        if p == cur:
            out.append((w, 1))
            cur = m
        else:
            out.append((w, -1))
            cur = p
        if cur == start:
            break
    if len(used) != len(walls) or cur != start:
        raise TilingFailure("cells around an interior ridge do not form a cycle")
    return out


# ---------------------------------------------------------------------------
# cross-ratios


def _minor(F, cols: Sequence[int]):
    if isinstance(F, Configuration):
        return kdet([F.covectors[i] for i in cols], F.field)
    return det(MatrixK.from_columns([F.vectors[i] for i in cols], F.field))


def cross_ratio(F, V: Sequence[int], W: Sequence[int]) -> ScalarK:
    """Det(i1 i2 W) Det(i3 i4 W) / (Det(i1 i3 W) Det(i2 i4 W)) for V = (i1..i4)."""
    V, W = list(V), list(W)
    if len(V) != 4 or len(set(V)) != 4:
        raise ValueError("V must have four distinct indices")
    if set(V) & set(W) or len(W) != F.r - 2:
        raise ValueError("W must be an (r-2)-subset disjoint from V")
    i1, i2, i3, i4 = V
    num = _minor(F, [i1, i2] + W) * _minor(F, [i3, i4] + W)
    den = _minor(F, [i1, i3] + W) * _minor(F, [i2, i4] + W)
    if num == 0 and den == 0:
        raise IndeterminateCR("numerator and denominator both vanish", V=[v + 1 for v in V],
                              W=[w + 1 for w in W])
    if den == 0:
        return INF
    return num / den


def cross_ratio_limit(F, V: Sequence[int], W: Sequence[int]):
    """Value at z = 0: a k-element, or INF."""
    cr = cross_ratio(F, V, W)
    if cr is INF or not isinstance(cr, ScalarK):
        return cr
    if cr.is_zero():
        return F.field.zero
    v = cr.val()
    if v > 0:
        return F.field.zero
    if v < 0:
        return INF
    return cr.lead()


def is_degenerate_value(x, field) -> bool:
    return x is INF or x == field.zero or x == field.one


# ---------------------------------------------------------------------------
# dimension audit


@dataclass(frozen=True)
class DimensionAudit:
    dim_XC: int
    lhs: int
    rhs: int
    tangent: int
    points: int

    @property
    def violates(self) -> bool:
        return self.lhs > self.rhs

    def to_json(self) -> dict:
        return {"dim_XC": self.dim_XC, "lhs": self.lhs, "rhs": self.rhs,
                "violates": self.violates, "tangent_dim": self.tangent,
                "multiple_points": self.points}


def validate_witness(C: Configuration, I_list: Sequence[Iterable[int]]) -> list[tuple]:
    """Point of each I_a; raises WitnessInvalid unless I_a is exactly the lines through it."""
    pts = []
    for a, I in enumerate(I_list):
        I = sorted(set(I))
        if len(I) < C.r or C.rank(I) != C.r - 1:
            raise WitnessInvalid(f"I_{a + 1} does not meet in a single point", I=[i + 1 for i in I])
        p = C.point_through(I)
        inc = list(C.incident(p))
        if inc != I:
            raise WitnessInvalid(f"I_{a + 1} misses hyperplanes through its point",
                                 I=[i + 1 for i in I], incident=[i + 1 for i in inc])
        pts.append(p)
    return pts


def dimension_audit(C: Configuration, I_list: Sequence[Iterable[int]] | None = None) -> DimensionAudit:
    """First-order dimension of the configuration space with the given incidences."""
    r, n, f = C.r, C.n, C.field
    if I_list is None:
        I_list = C.multiple_points()
    I_list = [sorted(set(I)) for I in I_list]
    pts = validate_witness(C, I_list)
    m = len(pts)
    nvar = (n + m) * r
    zero = f.zero

    def cov(i: int, q: int) -> int:
        return i * r + q

    def pnt(a: int, q: int) -> int:
        return (n + a) * r + q

    rows = []
    for a, (I, p) in enumerate(zip(I_list, pts)):
        for i in I:
            row = [zero] * nvar
            for q in range(r):
                row[cov(i, q)] = p[q]
                row[pnt(a, q)] = C.covectors[i][q]
            rows.append(row)
    tangent = nvar - (krank(rows, f) if rows else 0)

    trivial = []
    for i, v in enumerate(C.covectors):
        row = [zero] * nvar
        for q in range(r):
            row[cov(i, q)] = v[q]
        trivial.append(row)
    for a, p in enumerate(pts):
        row = [zero] * nvar
        for q in range(r):
            row[pnt(a, q)] = p[q]
        trivial.append(row)
    for s in range(r):
        for t in range(r):
            # A = E_st acting by p -> A p and v -> -v A
            row = [zero] * nvar
            for a, p in enumerate(pts):
                row[pnt(a, s)] = p[t]
            for i, v in enumerate(C.covectors):
                row[cov(i, t)] = row[cov(i, t)] - v[s]
            trivial.append(row)
    dim_XC = tangent - krank(trivial, f)
    lhs = sum(len(I) - r + 1 for I in I_list) + dim_XC
    rhs = n * (r - 1) - r * r + 1
    return DimensionAudit(dim_XC, lhs, rhs, tangent, m)


__all__ = [
    "Matroid", "MatroidPolytope", "MatroidDecomposition", "PolyhedralDecomposition",
    "AffCohomology", "DimensionAudit", "matroid_of", "polytope_of", "normalized_volume",
    "hypersimplex", "eulerian", "polytope_from_inequalities", "verify_tiling",
    "tiling_witness", "is_unimodular", "decomposition_from_limits", "central_decomposition",
    "coarsenings", "overlaps_on_boundary", "is_lax", "find_lax_order", "aff_cohomology",
    "cross_ratio", "cross_ratio_limit", "is_degenerate_value", "dimension_audit",
    "validate_witness",
]
