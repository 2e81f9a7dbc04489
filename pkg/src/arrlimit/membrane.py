"""Lattices attached to a family of vectors f_1..f_n in K^r.

Covers stable lattices, limit configurations, membrane membership, the
norm vector Ψ, enumeration of GIT-stable classes, and the stratification
of a single apartment by the combinatorial type of its limit
configurations (r <= 3).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .building import (Lattice, LatticeClass, as_lattice, image_mod_z, sorted_classes,
                       theta_limit)
from .config import Configuration
from .errors import (DegenerateSpan, NoStableLattice, ParseError, RankNotSupported,
                     SingularMatrix, WindowUnstable)
from .scalar import (INF, QQ, BaseField, MatrixK, ScalarK, VectorK, det, parse_scalar,
                     rank, solve_linear, solve_many)

LimitConfiguration = Configuration


# ---------------------------------------------------------------------------
# arrangements


@dataclass(frozen=True)
class Arrangement:
    """Vectors f_1..f_n spanning K^r (stored 0-based)."""

    r: int
    vectors: tuple[VectorK, ...]
    field: BaseField = QQ

    def __post_init__(self) -> None:
        if not self.vectors:
            raise DegenerateSpan("empty arrangement")
        if any(len(v) != self.r for v in self.vectors):
            raise ValueError("vector length differs from r")
        if any(all(x.is_zero() for x in v) for v in self.vectors):
            raise DegenerateSpan("zero vector in arrangement")
        if rank(MatrixK.from_columns(self.vectors, self.field)) < self.r:
            raise DegenerateSpan("vectors do not span K^r")

    @classmethod
    def make(cls, vectors: Iterable[Sequence[object]], field: BaseField = QQ) -> "Arrangement":
        vs = tuple(tuple(field.K(x) for x in v) for v in vectors)
        return cls(len(vs[0]), vs, field)

    @property
    def n(self) -> int:
        return len(self.vectors)

    def columns(self, idx: Iterable[int]) -> MatrixK:
        return MatrixK.from_columns([self.vectors[i] for i in idx], self.field)

    def minor(self, idx: Sequence[int]) -> ScalarK:
        return det(self.columns(idx))

    def independent(self, idx: Sequence[int]) -> bool:
        return not self.minor(idx).is_zero()

    def dependent_subsets(self) -> list[tuple[int, ...]]:
        """r-subsets that are K-dependent (violations of general position)."""
        return [T for T in combinations(range(self.n), self.r) if not self.independent(T)]

    def coefficients(self, T: Sequence[int], j: int) -> VectorK:
        """Coordinates of f_j in the basis f_T."""
        return solve_linear(self.columns(T), self.vectors[j])

    def to_json(self) -> dict:
        return {"r": self.r, "n": self.n, "base_field": self.field.to_json(),
                "vectors": [[str(x) for x in v] for v in self.vectors]}

    @classmethod
    def from_json(cls, obj: dict) -> "Arrangement":
        try:
            field = BaseField.from_json(obj.get("base_field", {"kind": "Q"}))
            vs = obj["vectors"]
            r = int(obj.get("r", len(vs[0])))
            n = int(obj.get("n", len(vs)))
            if len(vs) != n or any(len(v) != r for v in vs):
                raise ParseError("declared r, n do not match the vectors")
            vecs = tuple(tuple(parse_scalar(str(x), field) for x in v) for v in vs)
        except (KeyError, TypeError, IndexError, AttributeError) as exc:
            raise ParseError(f"bad arrangement: {exc}") from None
        return cls(r, vecs, field)


# ---------------------------------------------------------------------------
# stable lattices


def stable_lattice_of(F: Arrangement, Z: Sequence[int]) -> LatticeClass | None:
    """Λ_Z = <z^{a_i} f_i> for an (r+1)-subset Z = (j_0, j_1..j_r); None if degenerate."""
    if any(not F.independent(T) for T in combinations(Z, F.r)):
        return None
    j0, rest = Z[0], Z[1:]
    c = F.coefficients(rest, j0)
    gens = [tuple(F.field.z(int(ci.val())) * x for x in F.vectors[j]) for ci, j in zip(c, rest)]
    return LatticeClass.from_generators(gens, F.field)


def stable_lattices(F: Arrangement) -> list[LatticeClass]:
    """Stab: the lattices Λ_Z over all non-degenerate (r+1)-subsets Z."""
    out = {}
    for Z in combinations(range(F.n), F.r + 1):
        L = stable_lattice_of(F, Z)
        if L is not None:
            out[L.key] = L
    if not out:
        raise NoStableLattice("every (r+1)-subset contains a K-dependent r-subset")
    return sorted_classes(out.values())


def coefficient_spread(F: Arrangement) -> int:
    """max - min valuation over all coordinates of f_j in bases f_T."""
    vals = []
    for T in combinations(range(F.n), F.r):
        if not F.independent(T):
            continue
        for j in range(F.n):
            if j in T:
                continue
            vals += [int(c.val()) for c in F.coefficients(T, j) if not c.is_zero()]
    return (max(vals) - min(vals)) if vals else 0


# ---------------------------------------------------------------------------
# limit data


def limit_configuration(F: Arrangement, Lam: Lattice | LatticeClass) -> Configuration:
    """Residues of f_i^Λ in Λ/zΛ, in Λ's canonical coordinates."""
    L = as_lattice(Lam)
    lims = [theta_limit(L, v) for v in F.vectors]
    return Configuration.make(image_mod_z(L, lims), F.field)


def is_stable(F: Arrangement, Lam: Lattice | LatticeClass) -> bool:
    return limit_configuration(F, Lam).is_stable()


def is_git_stable(F: Arrangement, Lam: Lattice | LatticeClass) -> bool:
    return limit_configuration(F, Lam).is_git_stable()


def in_membrane(F: Arrangement, Lam: Lattice | LatticeClass) -> bool:
    """Limit covectors span Λ/zΛ."""
    return limit_configuration(F, Lam).rank() == F.r


def norm_vector(F: Arrangement, Lam: Lattice | LatticeClass) -> tuple[int, ...]:
    """(N_Λ(f_1), ..., N_Λ(f_n)) with N_Λ(v) = -a for z^a v ∈ Λ \\ zΛ."""
    L = as_lattice(Lam)
    return tuple(int(L.order(v)) for v in F.vectors)


def psi(F: Arrangement, Lam: Lattice | LatticeClass) -> tuple[int, ...]:
    """Norm vector normalized so its first coordinate is 0."""
    N = norm_vector(F, Lam)
    return tuple(x - N[0] for x in N)


def apartment_lattice(F: Arrangement, T: Sequence[int], b: Sequence[int]) -> LatticeClass:
    """Class of <z^{b_1} f_{t_1}, ..., z^{b_r} f_{t_r}>."""
    return LatticeClass.from_generators(
        [tuple(F.field.z(bi) * x for x in F.vectors[t]) for t, bi in zip(T, b)], F.field)


def in_some_apartment(F: Arrangement, Lam: LatticeClass) -> bool:
    """Apartment-membership oracle: Λ = [<z^{a_i} f_{t_i}>] for some T and integers a."""
    L = Lam.rep
    for T in combinations(range(F.n), F.r):
        if not F.independent(T):
            continue
        a = [-int(L.order(F.vectors[t])) for t in T]
        if apartment_lattice(F, T, a) == Lam:
            return True
    return False


def default_window(F: Arrangement) -> int:
    return coefficient_spread(F) + 1


def _shift_vectors(r: int, w: int) -> Iterable[tuple[int, ...]]:
    """Integer vectors b with b_1 = 0 and max(b) - min(b) <= 2w (the cube [-w,w]^r mod shifts)."""
    for tail in product(range(-2 * w, 2 * w + 1), repeat=r - 1):
        b = (0,) + tail
        if max(b) - min(b) <= 2 * w:
            yield b


def _git_stable_in_window(F: Arrangement, w: int, cache: dict) -> dict:
    # GIT stability does not depend on the basis of Λ/zΛ, so the limit
    # configuration is read off the apartment coordinates directly
    out = {}
    for T in combinations(range(F.n), F.r):
        if not F.independent(T):
            continue
        if T not in cache:
            cache[T] = _ApartmentData(F, T)
        data = cache[T]
        for b in _shift_vectors(F.r, w):
            key = (T, b)
            if key not in cache:
                pat = data.pattern(b[1:])
                if (T, pat) not in cache:
                    cache[(T, pat)] = data.configuration(pat).is_git_stable()
                ok = cache[(T, pat)]
                cache[key] = data.lattice(b[1:]) if ok else None
            L = cache[key]
            if L is not None:
                out[L.key] = L
    return out


def git_stable_classes(F: Arrangement, window: int | None = None) -> list[LatticeClass]:
    """GIT-stable classes in the membrane, enumerated through apartments.

    The search is repeated with window + 1; a change raises ``WindowUnstable``.
    That check is a heuristic: a window that is far too small can agree with
    its successor and still miss classes. The default window has not failed
    on the test suite.
    TODO: derive a sufficient window from the apartment stratification.
    """
    w = default_window(F) if window is None else window
    if w < 1:
        raise ValueError("window must be positive")
    cache: dict = {}
    a = _git_stable_in_window(F, w, cache)
    b = _git_stable_in_window(F, w + 1, cache)
    if set(a) != set(b):
        raise WindowUnstable(f"GIT-stable set changes between window {w} and {w + 1}",
                             window=w, found=len(a), found_next=len(b))
    return sorted_classes(a.values())


# ---------------------------------------------------------------------------
# apartment stratification


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass
class Cell:
    """A cell of an apartment stratification.

    ``pattern`` lists, for every j outside T, the positions of T where the
    coordinate of f_j attains its minimal shifted valuation; it determines
    the limit configuration on the open cell.
    """

    dim: int
    vertices: tuple[int, ...]
    bounded: bool
    pattern: tuple[tuple[int, ...], ...]
    bases: frozenset
    point: tuple[Fraction, ...]
    lattice: LatticeClass | None = None
    direction: tuple[int, ...] | None = None
    length: int | None = None


@dataclass
class StratumComplex:
    T: tuple[int, ...]
    r: int
    vertices: list[Cell] = dc_field(default_factory=list)
    edges: list[Cell] = dc_field(default_factory=list)
    faces: list[Cell] = dc_field(default_factory=list)

    def cells(self) -> list[Cell]:
        return self.vertices + self.edges + self.faces

    def to_json(self) -> dict:
        def one(c: Cell, i: int) -> dict:
            d = {"id": i, "dim": c.dim, "bounded": c.bounded,
                 "vertices": list(c.vertices),
                 "point": [str(x) for x in c.point],
                 "bases": sorted(sorted(j + 1 for j in B) for B in c.bases)}
            if c.lattice is not None:
                d["lattice"] = c.lattice.to_json()
            if c.direction is not None:
                d["direction"] = list(c.direction)
            if c.length is not None:
                d["length"] = c.length
            return d
        return {"T": [t + 1 for t in self.T],
                "vertices": [one(c, i) for i, c in enumerate(self.vertices)],
                "edges": [one(c, i) for i, c in enumerate(self.edges)],
                "faces": [one(c, i) for i, c in enumerate(self.faces)]}


class _ApartmentData:
    """Coordinates of every f_j in the basis f_T, with valuations and leads."""

    def __init__(self, F: Arrangement, T: Sequence[int]) -> None:
        self.F, self.T = F, tuple(T)
        others = [j for j in range(F.n) if j not in self.T]
        sols = solve_many(F.columns(self.T), [F.vectors[j] for j in others])
        self.others = others
        self.vals = {j: [c.val() for c in s] for j, s in zip(others, sols)}
        self.leads = {j: [c.lead() for c in s] for j, s in zip(others, sols)}

    def pattern(self, x: Sequence[Fraction]) -> tuple[tuple[int, ...], ...]:
        a = (Fraction(0),) + tuple(x)
        pat = []
        for j in self.others:
            sh = [v - ai if v != INF else INF for v, ai in zip(self.vals[j], a)]
            m = min(sh)
            pat.append(tuple(i for i, s in enumerate(sh) if s == m))
        return tuple(pat)

    def configuration(self, pattern) -> Configuration:
        F = self.F
        cov: list[list] = [None] * F.n  # type: ignore[list-item]
        for pos, t in enumerate(self.T):
            cov[t] = [F.field.one if i == pos else F.field.zero for i in range(F.r)]
        for j, S in zip(self.others, pattern):
            cov[j] = [self.leads[j][i] if i in S else F.field.zero for i in range(F.r)]
        return Configuration.make(cov, F.field)

    def bases(self, pattern) -> frozenset:
        C = self.configuration(pattern)
        return frozenset(frozenset(B) for B in combinations(range(self.F.n), self.F.r) if C.is_basis(B))

    def lattice(self, x: Sequence[int]) -> LatticeClass:
        return apartment_lattice(self.F, self.T, (0,) + tuple(int(v) for v in x))

    def walls(self) -> list[tuple[tuple[int, int], tuple[int, int], bool]]:
        """Planar walls (base point, direction, is_full_line) for r = 3."""
        out = []
        for j in self.others:
            u = self.vals[j]
            S = [i for i in range(3) if u[i] != INF]
            if len(S) == 3:
                p, q = int(u[1] - u[0]), int(u[2] - u[0])
                for d in ((0, -1), (-1, 0), (1, 1)):
                    out.append(((p, q), d, False))
            elif len(S) == 2:
                if S == [0, 1]:
                    out.append(((int(u[1] - u[0]), 0), (0, 1), True))
                elif S == [0, 2]:
                    out.append(((0, int(u[2] - u[0])), (1, 0), True))
                else:
                    out.append(((0, int(u[2] - u[1])), (1, 1), True))
        return out


def _cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _intersect(w1, w2):
    """Intersection point of two walls, or None (parallel or out of range)."""
    (P, d, full1), (Q, e, full2) = w1, w2
    den = _cross(d, e)
    if den == 0:
        return None
    diff = (Q[0] - P[0], Q[1] - P[1])
    t = Fraction(_cross(diff, e), den)
    s = Fraction(_cross(diff, d), den)
    if (not full1 and t < 0) or (not full2 and s < 0):
        return None
    return (P[0] + t * d[0], P[1] + t * d[1])


def _param(w, X) -> Fraction | None:
    """Parameter t with X = P + t d if X lies on wall w."""
    P, d, full = w
    diff = (X[0] - P[0], X[1] - P[1])
    if _cross(diff, d) != 0:
        return None
    t = Fraction(diff[0], d[0]) if d[0] else Fraction(diff[1], d[1])
    if not full and t < 0:
        return None
    return t


def _stratify_r2(data: _ApartmentData) -> StratumComplex:
    comp = StratumComplex(data.T, 2)
    pts = sorted({int(data.vals[j][1] - data.vals[j][0]) for j in data.others
                  if data.vals[j][0] != INF and data.vals[j][1] != INF})

    def cell(dim, verts, bounded, x, direction=None, length=None):
        pat = data.pattern(x)
        lat = data.lattice(x) if all(_frac(v).denominator == 1 for v in x) else None
        return Cell(dim, verts, bounded, pat, data.bases(pat), tuple(_frac(v) for v in x),
                    lat, direction, length)

    for p in pts:
        comp.vertices.append(cell(0, (len(comp.vertices),), True, (p,)))
    if not pts:
        comp.edges.append(cell(1, (), False, (0,), (1,)))
        return comp
    comp.edges.append(cell(1, (0,), False, (pts[0] - 1,), (-1,)))
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        mid = Fraction(a + b, 2)
        c = cell(1, (i, i + 1), True, (mid,), None, b - a)
        if b - a >= 2:
            c.lattice = data.lattice((a + 1,))
        comp.edges.append(c)
    comp.edges.append(cell(1, (len(pts) - 1,), False, (pts[-1] + 1,), (1,)))
    return comp


def _stratify_r3(data: _ApartmentData) -> StratumComplex:
    walls = data.walls()
    comp = StratumComplex(data.T, 3)
    vset: set = set()
    for P, d, full in walls:
        if not full:
            vset.add((Fraction(P[0]), Fraction(P[1])))
    for w1, w2 in combinations(walls, 2):
        X = _intersect(w1, w2)
        if X is not None:
            vset.add((Fraction(X[0]), Fraction(X[1])))
    verts = sorted(vset)
    vid = {v: i for i, v in enumerate(verts)}

    def label(dim, vs, bounded, x, direction=None, length=None):
        pat = data.pattern(x)
        lat = data.lattice(x) if all(v.denominator == 1 for v in x) else None
        return Cell(dim, tuple(vs), bounded, pat, data.bases(pat), tuple(x), lat, direction, length)

    for v in verts:
        comp.vertices.append(label(0, (vid[v],), True, v))

    # split walls at vertices into edges; key edges to merge overlapping walls
    edge_keys: dict = {}
    segs: list[tuple] = []  # (u, v) vertex coords or (u, None, dir) rays, or (None, None, line)
    for w in walls:
        P, d, full = w
        ts = sorted({t for v in verts for t in [_param(w, v)] if t is not None})
        if not ts:
            key = ("line", _line_key(P, d))
            if key not in edge_keys:
                edge_keys[key] = None
                segs.append(("line", P, d))
            continue
        pts = [(P[0] + t * d[0], P[1] + t * d[1]) for t in ts]
        for a, b in zip(pts, pts[1:]):
            key = ("seg", frozenset((a, b)))
            if key not in edge_keys:
                edge_keys[key] = None
                segs.append(("seg", a, b))
        ends = [(pts[-1], d)]
        if full:
            ends.append((pts[0], (-d[0], -d[1])))
        for a, dd in ends:
            key = ("ray", a, dd)
            if key not in edge_keys:
                edge_keys[key] = None
                segs.append(("ray", a, dd))

    for s in segs:
        if s[0] == "seg":
            a, b = s[1], s[2]
            mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            length = int(max(abs(a[0] - b[0]), abs(a[1] - b[1])))
            c = label(1, sorted((vid[a], vid[b])), True, mid, None, length)
            if length >= 2:
                step = ((b[0] - a[0]) / length, (b[1] - a[1]) / length)
                c.lattice = data.lattice((a[0] + step[0], a[1] + step[1]))
            comp.edges.append(c)
        elif s[0] == "ray":
            a, dd = s[1], s[2]
            comp.edges.append(label(1, (vid[a],), False, (a[0] + dd[0], a[1] + dd[1]), dd))
        else:
            P, d = s[1], s[2]
            comp.edges.append(label(1, (), False, (Fraction(P[0]), Fraction(P[1])), d))

    comp.faces = _faces(data, comp, verts, vid, segs, label)
    return comp


def _line_key(P, d):
    # normal form of the line through P with direction d
    return (d, _cross(P, d))


def _faces(data, comp, verts, vid, segs, label) -> list[Cell]:
    """Faces of the planar subdivision, via half-edge traversal inside a box."""
    import math

    coords = [c for v in verts for c in v] + [c for s in segs if s[0] == "line" for c in s[1]]
    B = Fraction(int(max([abs(c) for c in coords] + [0])) + 3)
    nodes: dict = {}

    def node(p):
        p = (Fraction(p[0]), Fraction(p[1]))
        if p not in nodes:
            nodes[p] = len(nodes)
        return nodes[p]

    for v in verts:
        node(v)
    adj: dict[int, set] = {}

    def link(p, q):
        a, b = node(p), node(q)
        if a != b:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)

    def hit_box(P, d):
        ts = []
        for k in range(2):
            if d[k] > 0:
                ts.append((B - P[k]) / d[k])
            elif d[k] < 0:
                ts.append((-B - P[k]) / d[k])
        t = min(ts)
        return (P[0] + t * d[0], P[1] + t * d[1])

    box_pts = set()
    for s in segs:
        if s[0] == "seg":
            link(s[1], s[2])
        elif s[0] == "ray":
            X = hit_box(s[1], s[2])
            box_pts.add(X)
            link(s[1], X)
        else:
            P, d = (Fraction(s[1][0]), Fraction(s[1][1])), s[2]
            X, Y = hit_box(P, d), hit_box(P, (-d[0], -d[1]))
            box_pts.update((X, Y))
            link(X, Y)
    corners = [(B, B), (-B, B), (-B, -B), (B, -B)]
    box_pts.update(corners)

    def box_pos(p):
        # position along the box boundary, counterclockwise from (B, -B)
        x, y = p
        if x == B and y > -B:
            return (0, y)
        if y == B:
            return (1, -x)
        if x == -B:
            return (2, -y)
        return (3, x)

    ring = sorted(box_pts, key=box_pos)
    for p, q in zip(ring, ring[1:] + ring[:1]):
        link(p, q)
    pos = {i: p for p, i in nodes.items()}
    box_ids = {nodes[p] for p in box_pts}

    def ang(a, b):
        return math.atan2(float(pos[b][1] - pos[a][1]), float(pos[b][0] - pos[a][0]))

    order = {a: sorted(nbrs, key=lambda b: ang(a, b)) for a, nbrs in adj.items()}
    seen = set()
    faces = []
    for a in sorted(adj):
        for b in order[a]:
            if (a, b) in seen:
                continue
            cyc = []
            u, v = a, b
            while (u, v) not in seen:
                seen.add((u, v))
                cyc.append(u)
                lst = order[v]
                k = lst.index(u)
                u, v = v, lst[k - 1]
            area = sum(pos[p][0] * pos[q][1] - pos[q][0] * pos[p][1]
                       for p, q in zip(cyc, cyc[1:] + cyc[:1]))
            if area <= 0:
                continue
            faces.append(cyc)
    out = []
    for cyc in faces:
        bounded = not any(p in box_ids for p in cyc)
        real = [p for p in cyc if p not in box_ids and pos[p] in vid]
        cx = sum(pos[p][0] for p in cyc) / len(cyc)
        cy = sum(pos[p][1] for p in cyc) / len(cyc)
        ids = [vid[pos[p]] for p in real]
        if ids:
            k = ids.index(min(ids)) if bounded else 0
            ids = ids[k:] + ids[:k] if bounded else _open_chain(cyc, box_ids, pos, vid)
        c = label(2, ids, bounded, (cx, cy))
        ip = _integer_point(data, c.pattern, cyc, pos)
        if ip is not None:
            c.lattice = data.lattice(ip)
        out.append(c)
    out.sort(key=lambda c: (not c.bounded, c.vertices, c.point))
    return out


def _open_chain(cyc, box_ids, pos, vid) -> list[int]:
    """Real vertices of an unbounded face, in boundary order between the box arcs."""
    n = len(cyc)
    start = next(i for i in range(n) if cyc[i] in box_ids and cyc[(i + 1) % n] not in box_ids)
    chain = []
    i = (start + 1) % n
    while cyc[i] not in box_ids:
        chain.append(vid[pos[cyc[i]]])
        i = (i + 1) % n
    return chain


def _integer_point(data, pattern, cyc, pos):
    xs = [pos[p][0] for p in cyc]
    ys = [pos[p][1] for p in cyc]
    import math
    for x in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for y in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            if data.pattern((Fraction(x), Fraction(y))) == pattern:
                return (x, y)
    return None


def apartment_stratification(F: Arrangement, T: Sequence[int], window: int | None = None) -> StratumComplex:
    """Cells of the apartment of f_T cut out by the fans of the other f_j.

    Coordinates are (a_2 - a_1, ..., a_r - a_1) for the lattice
    <z^{a_1} f_{t_1}, ..., z^{a_r} f_{t_r}>.  With a window, only cells
    meeting the box [-window, window]^{r-1} are kept.
    """
    if F.r > 3:
        raise RankNotSupported("apartment stratification is implemented for r <= 3")
    if F.r < 2:
        raise RankNotSupported("apartment stratification needs r >= 2")
    if not F.independent(T):
        raise SingularMatrix("T is not a K-basis")
    data = _ApartmentData(F, T)
    comp = _stratify_r2(data) if F.r == 2 else _stratify_r3(data)
    if window is not None:
        comp = _clip(comp, window)
    return comp


def _clip(comp: StratumComplex, W: int) -> StratumComplex:
    def inside(p):
        return all(-W <= x <= W for x in p)

    keep_v = [i for i, v in enumerate(comp.vertices) if inside(v.point)]
    remap = {old: new for new, old in enumerate(keep_v)}
    out = StratumComplex(comp.T, comp.r)
    out.vertices = [comp.vertices[i] for i in keep_v]

    def fix(c: Cell) -> Cell:
        return Cell(c.dim, tuple(remap[v] for v in c.vertices if v in remap), c.bounded, c.pattern,
                    c.bases, c.point, c.lattice, c.direction, c.length)

    for c in comp.edges + comp.faces:
        if inside(c.point) or any(v in remap for v in c.vertices):
            (out.edges if c.dim == 1 else out.faces).append(fix(c))
    return out
