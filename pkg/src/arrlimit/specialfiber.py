"""Combinatorics of special fibers attached to a finite convex set Y of classes.

``fiber_complex`` records the flag complex of Y together with, at every
vertex, the family of residue subspaces that prescribes the iterated
blowup of that component.  ``limit_surface`` describes the r = 3 limit
pair through apartment stratifications: components, double curves and the
germs at points lying on three or more components.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Iterable, Sequence

from .building import (BuildingSimplex, Lattice, LatticeClass, ResidueSubspace,
                       as_lattice, convex_hull, image_mod_z, is_convex, pairwise_incident_subsets,
                       residue, simplex_of, sorted_classes, star_residues, theta_limit)
from .config import Configuration
from .errors import MissingStable, NoStableLattice, NotConvex, RankNotSupported, TrivialQuotient
from .membrane import (Arrangement, apartment_stratification, git_stable_classes,
                       limit_configuration, stable_lattices)
from .scalar import MatrixK, krank, nullspace, rank

# ---------------------------------------------------------------------------
# fiber complex


@dataclass
class BlowupCenter:
    subspace: ResidueSubspace
    depth: int

    @property
    def center_dim(self) -> int:
        """Dimension of the center P(M̄/W) inside P(M̄)."""
        return self.subspace.ambient.r - 1 - self.subspace.dim

    def to_json(self) -> dict:
        return {"dim": self.subspace.dim, "depth": self.depth, "center_dim": self.center_dim,
                "basis": [list(r) for r in self.subspace.key]}


@dataclass
class ComponentRecord:
    lattice: LatticeClass
    centers: list[BlowupCenter]
    disjoint: bool

    def effective_centers(self) -> list[BlowupCenter]:
        """Centers of codimension at least two (divisorial blowups change nothing)."""
        return [c for c in self.centers if c.center_dim <= self.lattice.r - 3]


@dataclass
class FiberComplex:
    F: Arrangement
    vertices: list[LatticeClass]
    simplices: list[tuple[int, ...]]
    components: list[ComponentRecord]
    convex: bool = True
    contains_stable: bool | None = None
    indices: tuple[int, ...] = ()

    def index(self, M: LatticeClass) -> int:
        return self.vertices.index(M)

    @property
    def dim(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [s for s in self.simplices if len(s) == 2]

    def to_json(self) -> dict:
        return {"vertices": [v.to_json() for v in self.vertices],
                "simplices": [[i + 1 for i in s] for s in self.simplices],
                "components": [{"vertex": k + 1,
                                "centers": [c.to_json() for c in rec.centers],
                                "centers_disjoint": rec.disjoint}
                               for k, rec in enumerate(self.components)],
                "convex": self.convex, "contains_stable": self.contains_stable}


def residue_family(M: LatticeClass, Y: Iterable[LatticeClass]) -> list[ResidueSubspace]:
    """Res_M(Y): the images of N^M in M̄ for N in Y, together with M̄ itself."""
    out: dict[tuple, ResidueSubspace] = {}
    for N in sorted_classes(Y):
        W = residue(M, N)
        out.setdefault(W.key, W)
    return sorted(out.values(), key=lambda W: (W.dim, W.key))


def _depths(family: list[ResidueSubspace]) -> dict[tuple, int]:
    """Length of the longest proper chain from W up to the full space."""
    depth: dict[tuple, int] = {}
    for W in sorted(family, key=lambda W: -W.dim):
        above = [depth[V.key] for V in family if V.key in depth and W < V]
        depth[W.key] = 1 + max(above) if above else 0
    return depth


def _centers(M: LatticeClass, Y: Iterable[LatticeClass]) -> tuple[list[BlowupCenter], bool]:
    fam = residue_family(M, Y)
    depth = _depths(fam)
    centers = [BlowupCenter(W, depth[W.key]) for W in fam if W.dim < M.r]
    keys = {W.key: W for W in fam}
    ok = True
    # equal-depth centers must be separated: W + W' sits strictly higher
    for a, b in combinations(centers, 2):
        if a.depth != b.depth:
            continue
        S = a.subspace + b.subspace
        if S.dim == M.r:
            continue
        if S.key not in keys or depth[S.key] >= a.depth:
            ok = False
    return centers, ok


def fiber_complex(F: Arrangement, Y: Iterable[LatticeClass], check: bool = True) -> FiberComplex:
    Y = sorted_classes(set(Y))
    if not Y:
        raise ValueError("Y is empty")
    convex = is_convex(Y)
    stab_ok = None                      # not checked
    if check:
        if not convex:
            raise NotConvex("Y is not closed under the hull operation")
        try:
            missing = [S for S in stable_lattices(F) if S not in Y]
        except NoStableLattice:
            missing = []
        if missing:
            raise MissingStable("Y does not contain every stable lattice",
                                missing=[m.to_json() for m in missing])
        stab_ok = True
    pos = {M: k for k, M in enumerate(Y)}
    simplices = [tuple(pos[M] for M in s) for s in pairwise_incident_subsets(Y)]
    simplices.sort(key=lambda s: (len(s), s))
    comps = []
    for M in Y:
        centers, ok = _centers(M, Y)
        comps.append(ComponentRecord(M, centers, ok))
    return FiberComplex(F, Y, simplices, comps, convex, stab_ok, tuple(range(F.n)))


def simplex_flag(X: FiberComplex, s: Sequence[int]) -> BuildingSimplex:
    sigma = simplex_of([X.vertices[i] for i in s])
    assert sigma is not None
    return sigma


def simplex_residues(X: FiberComplex, s: Sequence[int]) -> dict[int, list[ResidueSubspace]]:
    """Per-level residue families of a simplex (the product decomposition data)."""
    return star_residues(simplex_flag(X, s), X.vertices)


# ---------------------------------------------------------------------------
# boundary


def _raised(M: LatticeClass, f) -> LatticeClass:
    """[M + z^{-1} f^M R]."""
    L = as_lattice(M)
    lim = theta_limit(L, f)
    zinv = L.field.z(-1)
    return Lattice.from_generators(list(L.cols) + [tuple(zinv * x for x in lim)], L.field).cls()


def boundary_incidence(F: Arrangement, Y: Iterable[LatticeClass]) -> dict[int, list[LatticeClass]]:
    """For each index i, the classes M in Y whose component carries a piece of B_i."""
    Y = sorted_classes(set(Y))
    keys = {M.key for M in Y}
    out: dict[int, list[LatticeClass]] = {}
    for i, f in enumerate(F.vectors):
        out[i] = [M for M in Y if _raised(M, f).key not in keys]
    return out


def enlarge_off_boundary(F: Arrangement, Y: Iterable[LatticeClass], M: LatticeClass) -> list[LatticeClass]:
    """hull(Y ∪ {[M + z^{-1} f^M R]}); M's component then meets no B_i."""
    Y = sorted_classes(set(Y))
    if M not in Y:
        raise ValueError("M must lie in Y")
    new = convex_hull(Y + [_raised(M, f) for f in F.vectors])
    bad = [i for i, Ms in boundary_incidence(F, new).items() if M in Ms]
    if bad:
        raise ArithmeticError(f"boundary components {bad} survive on M")
    return new


# ---------------------------------------------------------------------------
# quotient membranes


@dataclass
class Quotient:
    """K^r -> K^r / V_I given by annihilator rows; ``kept`` lists surviving indices."""

    I: tuple[int, ...]
    rows: tuple[tuple, ...]
    arrangement: Arrangement
    kept: tuple[int, ...]

    def apply(self, v: Sequence) -> tuple:
        f = self.arrangement.field
        return tuple(sum((a * b for a, b in zip(row, v)), f.K(0)) for row in self.rows)

    def lattice(self, M: LatticeClass) -> LatticeClass:
        """Class of M^I = M/(M ∩ V_I), realized as the image of M."""
        gens = [self.apply(c) for c in as_lattice(M).cols]
        return Lattice.from_generators([g for g in gens if any(not x.is_zero() for x in g)],
                                       self.arrangement.field).cls()


def quotient_map(F: Arrangement, I: Iterable[int]) -> Quotient:
    I = tuple(sorted(set(I)))
    if not I:
        rows = tuple(tuple(F.field.K(1 if a == b else 0) for b in range(F.r)) for a in range(F.r))
        return Quotient(I, rows, F, tuple(range(F.n)))
    A = MatrixK([list(F.vectors[i]) for i in I], F.field, F.r)
    ann = nullspace(A)
    if not ann:
        raise TrivialQuotient("f_i, i in I span K^r", I=[i + 1 for i in I])
    rows = tuple(tuple(u) for u in ann)
    images, kept = [], []
    for j, f in enumerate(F.vectors):
        if j in I:
            continue
        img = tuple(sum((a * b for a, b in zip(row, f)), F.field.K(0)) for row in rows)
        if any(not x.is_zero() for x in img):
            images.append(img)
            kept.append(j)
    Fq = Arrangement(len(rows), tuple(images), F.field)
    return Quotient(I, rows, Fq, tuple(kept))


def quotient_membrane(F: Arrangement, Y: Iterable[LatticeClass], I: Iterable[int]) -> FiberComplex:
    """Fiber complex of Y^I over the quotient arrangement {f_j mod V_I}."""
    q = quotient_map(F, I)
    YI = sorted_classes({q.lattice(M) for M in Y})
    X = fiber_complex(q.arrangement, YI, check=False)
    X.indices = q.kept
    return X


def independent_residues(F: Arrangement, Y: Iterable[LatticeClass], I: Iterable[int]) -> bool:
    """At every M carrying all B_i (i in I), the residues of f_i^M are independent."""
    I = sorted(set(I))
    Y = sorted_classes(set(Y))
    bnd = boundary_incidence(F, Y)
    for M in Y:
        if all(M in bnd[i] for i in I):
            L = as_lattice(M)
            res = image_mod_z(L, [theta_limit(L, F.vectors[i]) for i in I])
            if krank(res, F.field) != len(I):
                return False
    return True


# ---------------------------------------------------------------------------
# r = 3 limit surface


@dataclass
class ComponentModel:
    lattice: LatticeClass
    configuration: Configuration
    blowup_points: list[tuple[int, ...]]
    inherited_points: list[tuple[int, ...]]
    special: bool

    @property
    def kind(self) -> str:
        return "P1xP1" if self.special else "blowup_P2"

    def to_json(self) -> dict:
        return {"lattice": self.lattice.to_json(), "kind": self.kind,
                "blowup_point_count": len(self.blowup_points),
                "blowup_points": [[i + 1 for i in p] for p in self.blowup_points],
                "inherited_points": [[i + 1 for i in p] for p in self.inherited_points],
                "special": self.special}


@dataclass
class GermReport:
    location: tuple[int, ...]
    kind: str
    bounded: bool

    def to_json(self) -> dict:
        return {"components": [i + 1 for i in self.location], "kind": self.kind,
                "bounded": self.bounded}


@dataclass
class GluingEdge:
    ends: tuple[int, int]
    curves: tuple[str, str]

    def to_json(self) -> dict:
        return {"components": [e + 1 for e in self.ends], "curves": list(self.curves)}


@dataclass
class LimitSurface:
    components: list[ComponentModel]
    edges: list[GluingEdge]
    germs: list[GermReport]
    strata_vertices_agree: bool
    degenerate_subsets: list[tuple[int, ...]] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components],
                "edges": [e.to_json() for e in self.edges],
                "germs": [g.to_json() for g in self.germs],
                "strata_vertices_agree": self.strata_vertices_agree,
                "degenerate_subsets": [[i + 1 for i in T] for T in self.degenerate_subsets]}


VALID_GERMS = {"normal_crossing", "chain", "cycle_3", "cycle_4", "cycle_5", "cycle_6"}


def component_model(F: Arrangement, M: LatticeClass) -> ComponentModel:
    """Blowup data of the component of M for r = 3.

    A point of multiplicity >= 3 whose lines come from K-dependent vectors
    is forced by F itself rather than by the degeneration; such points are
    reported separately and are not blown up.
    """
    if F.r != 3:
        raise RankNotSupported("component models are implemented for r = 3")
    C = limit_configuration(F, M)
    blow, inh = [], []
    for _, idx in C.points(3):
        if rank(F.columns(idx)) <= 2:
            inh.append(idx)
        else:
            blow.append(idx)
    return ComponentModel(M, C, blow, inh, _special(C, blow))


def _special(C: Configuration, blow: list[tuple[int, ...]]) -> bool:
    """Some line L carries two blown-up points a, b met by every other line."""
    lines = C.distinct()
    for L in lines:
        on_L = [set(p) for p in blow if L in p]
        for a, b in combinations(on_L, 2):
            if all(C.covectors[j] == C.covectors[L] or j in a or j in b for j in range(C.n)):
                return True
    return False


def _curve_kind(M: LatticeClass, N: LatticeClass) -> str:
    W = residue(M, N)
    return "line" if W.dim == 1 else "exceptional"


def _cyclic_key(seq: list) -> tuple:
    n = len(seq)
    rots = [tuple(seq[k:] + seq[:k]) for k in range(n)]
    rev = seq[::-1]
    rots += [tuple(rev[k:] + rev[:k]) for k in range(n)]
    return min(rots)


def limit_surface(F: Arrangement, window: int | None = None) -> LimitSurface:
    if F.r != 3:
        raise RankNotSupported("the limit surface is implemented for r = 3")
    classes = git_stable_classes(F, window)
    pos = {M.key: k for k, M in enumerate(classes)}
    comps = [component_model(F, M) for M in classes]

    edges: dict[tuple[int, int], GluingEdge] = {}
    germs: dict[tuple, GermReport] = {}
    seen_vertices: set = set()
    for T in combinations(range(F.n), 3):
        if not F.independent(T):
            continue
        S = apartment_stratification(F, T)
        vkey = []
        for v in S.vertices:
            seen_vertices.add(v.lattice.key)
            vkey.append(pos.get(v.lattice.key, -1))
        for e in S.edges:
            if e.bounded:
                a, b = sorted(vkey[i] for i in e.vertices)
                if (a, b) not in edges:
                    A, B = classes[a], classes[b]
                    edges[(a, b)] = GluingEdge((a, b), (_curve_kind(A, B), _curve_kind(B, A)))
        for f in S.faces:
            ids = [vkey[i] for i in f.vertices]
            if not ids:
                continue
            if f.bounded:
                key = ("cycle", _cyclic_key(ids))
                kind = f"cycle_{len(ids)}"
            else:
                key = ("open", min(tuple(ids), tuple(ids[::-1])))
                kind = {1: "normal_crossing", 2: "normal_crossing", 3: "chain"}.get(
                    len(ids), f"chain_{len(ids)}")
            if key not in germs:
                germs[key] = GermReport(tuple(key[1]), kind, f.bounded)
    agree = seen_vertices == set(pos)
    germ_list = sorted(germs.values(), key=lambda g: (not g.bounded, g.location))
    return LimitSurface(comps, [edges[k] for k in sorted(edges)], germ_list, agree,
                        F.dependent_subsets())
