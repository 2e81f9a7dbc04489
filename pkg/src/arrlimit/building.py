"""Lattices and lattice classes in the affine building of K^r.

A ``Lattice`` is a concrete free R-submodule of K^r (R = k[[z]]) kept in
column Hermite form: lower triangular, pivots z^d on the diagonal, and each
entry left of a pivot reduced to a Laurent polynomial with exponents below
that pivot's exponent.  A ``LatticeClass`` is the Hermite form rescaled so
the smallest pivot exponent is 0; equality of classes is then equality of
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DegenerateSpan, ParseError, SameClass
from .scalar import (INF, BaseField, MatrixK, ScalarK, VectorK, krank, krref,
                     kstr)


# ---------------------------------------------------------------------------
# Hermite form over R


def _hermite(gens: Sequence[VectorK], r: int, field: BaseField) -> tuple[list[list[ScalarK]], tuple[int, ...]]:
    """Column Hermite basis of the R-span of ``gens`` (list of columns)."""
    cols = [list(g) for g in gens if any(not x.is_zero() for x in g)]
    basis: list[list[ScalarK]] = []
    exps: list[int] = []
    for i in range(r):
        best, bv = -1, INF
        for idx, c in enumerate(cols):
            v = c[i].val()
            if v < bv:
                best, bv = idx, v
        if best < 0:
            raise DegenerateSpan(f"generators span a subspace of rank {i} < {r}")
        pc = cols.pop(best)
        d = int(bv)
        unit = pc[i] / field.z(d)
        if unit != 1:
            inv = unit.inverse()
            pc = [x * inv if not x.is_zero() else x for x in pc]
        pc[i] = field.z(d)
        rest = []
        for c in cols:
            if not c[i].is_zero():
                q = c[i] / pc[i]
                c = [c[k] - q * pc[k] if k > i and not pc[k].is_zero() else c[k] for k in range(r)]
                c[i] = field.K(0)
            if any(not x.is_zero() for x in c[i + 1:]):
                rest.append(c)
        cols = rest
        basis.append(pc)
        exps.append(d)
    zero = field.K(0)
    for i in range(r):
        d = exps[i]
        piv = basis[i]
        for j in range(i):
            e = basis[j][i]
            if e.is_zero():
                continue
            low = e.truncate_below(d)
            if low == e:
                continue
            q = (e - low) / field.z(d)
            col = basis[j]
            for k in range(i + 1, r):
                if not piv[k].is_zero():
                    col[k] = col[k] - q * piv[k]
            col[i] = low
        for k in range(i):
            piv[k] = zero
    return basis, tuple(exps)


class Lattice:
    """A concrete R-lattice in K^r, stored in Hermite form (columns = basis)."""

    __slots__ = ("cols", "exps", "r", "field", "_key")

    def __init__(self, cols: Sequence[Sequence[ScalarK]], exps: Sequence[int], field: BaseField) -> None:
        self.cols = tuple(tuple(c) for c in cols)
        self.exps = tuple(exps)
        self.r = len(self.cols)
        self.field = field
        self._key: tuple[str, ...] | None = None

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[ScalarK]], field: BaseField | None = None) -> "Lattice":
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            raise DegenerateSpan("no generators")
        if field is None:
            field = vectors[0][0].field
        cols, exps = _hermite(vectors, len(vectors[0]), field)
        return cls(cols, exps, field)

    # -- structure --------------------------------------------------------------

    @property
    def matrix(self) -> MatrixK:
        return MatrixK.from_columns(self.cols, self.field)

    def basis(self) -> list[VectorK]:
        return list(self.cols)

    @property
    def key(self) -> tuple[str, ...]:
        if self._key is None:
            self._key = tuple(str(self.cols[j][i]) for i in range(self.r) for j in range(self.r))
        return self._key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lattice) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def scale(self, c: int) -> "Lattice":
        """z^c times this lattice (still in Hermite form)."""
        if c == 0:
            return self
        zc = self.field.z(c)
        return Lattice([[x * zc if not x.is_zero() else x for x in col] for col in self.cols],
                       [d + c for d in self.exps], self.field)

    def cls(self) -> "LatticeClass":
        return LatticeClass(self.scale(-min(self.exps)))

    def colength(self) -> int:
        """Sum of pivot exponents; length(L0/self) for the standard L0 = R^r."""
        return sum(self.exps)

    # -- coordinates and containment -----------------------------------------

    def coords(self, v: Sequence[ScalarK]) -> VectorK:
        """Coordinates of v in this basis (forward substitution)."""
        r = self.r
        x: list[ScalarK] = []
        for i in range(r):
            acc = v[i]
            for j in range(i):
                h = self.cols[j][i]
                if not h.is_zero() and not x[j].is_zero():
                    acc = acc - h * x[j]
            x.append(acc / self.cols[i][i] if not acc.is_zero() else acc)
        return tuple(x)

    def order(self, v: Sequence[ScalarK]) -> float | int:
        """Largest m with v in z^m * self (``INF`` for v = 0)."""
        return min(c.val() for c in self.coords(v))

    def contains(self, v: Sequence[ScalarK]) -> bool:
        return self.order(v) >= 0

    def order_of(self, other: "Lattice") -> int:
        """Largest m with other contained in z^m * self."""
        return int(min(self.order(c) for c in other.cols))

    def contains_lattice(self, other: "Lattice") -> bool:
        return self.order_of(other) >= 0

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(list(self.cols) + list(other.cols), self.field)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains_lattice(self)

    def __lt__(self, other: "Lattice") -> bool:
        return self <= other and self != other

    def __repr__(self) -> str:
        return f"Lattice({self.matrix})"


class LatticeClass:
    """Equivalence class [M] under K*-scaling; ``rep`` is the canonical lattice."""

    __slots__ = ("rep",)

    def __init__(self, rep: Lattice) -> None:
        if min(rep.exps) != 0:
            raise ValueError("representative is not normalized")
        self.rep = rep

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[ScalarK]], field: BaseField | None = None) -> "LatticeClass":
        return Lattice.from_generators(vectors, field).cls()

    @property
    def r(self) -> int:
        return self.rep.r

    @property
    def field(self) -> BaseField:
        return self.rep.field

    @property
    def matrix(self) -> MatrixK:
        return self.rep.matrix

    @property
    def key(self) -> tuple[str, ...]:
        return self.rep.key

    @property
    def exps(self) -> tuple[int, ...]:
        return self.rep.exps

    def basis(self) -> list[VectorK]:
        return self.rep.basis()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LatticeClass) and self.rep.key == other.rep.key

    def __hash__(self) -> int:
        return hash(self.rep.key)

    def __lt__(self, other: "LatticeClass") -> bool:
        return self.key < other.key

    def to_json(self) -> dict:
        return {"matrix": [[str(self.rep.cols[j][i]) for j in range(self.r)] for i in range(self.r)],
                "diag": list(self.exps)}

    @classmethod
    def from_json(cls, obj: dict | list, field: BaseField) -> "LatticeClass":
        """Accepts {"matrix": rows}, {"generators": vectors} or a bare list of rows."""
        from .scalar import parse_scalar

        try:
            if isinstance(obj, dict) and "generators" in obj:
                gens = [[parse_scalar(str(x), field) for x in v] for v in obj["generators"]]
            else:
                rows = obj["matrix"] if isinstance(obj, dict) else obj
                rows = [[parse_scalar(str(x), field) for x in row] for row in rows]
                gens = [[row[j] for row in rows] for j in range(len(rows[0]))]
            if not gens or any(len(g) != len(gens) for g in gens):
                raise ParseError("lattice class needs a square matrix")
        except (KeyError, TypeError, IndexError) as exc:
            raise ParseError(f"bad lattice class: {exc}") from None
        return cls.from_generators([tuple(g) for g in gens], field)

    def __repr__(self) -> str:
        return f"[{self.rep.matrix}]"


def as_lattice(x: Lattice | LatticeClass) -> Lattice:
    return x.rep if isinstance(x, LatticeClass) else x


def lattice_from_generators(vectors: Iterable[Sequence[ScalarK]], field: BaseField | None = None) -> LatticeClass:
    """Class of the R-span of ``vectors``; ``DegenerateSpan`` if they do not span K^r."""
    return LatticeClass.from_generators(vectors, field)


def sorted_classes(classes: Iterable[LatticeClass]) -> list[LatticeClass]:
    return sorted(set(classes), key=lambda c: c.key)


# ---------------------------------------------------------------------------
# relative position and incidence


def _smith_exponents(entries: list[list[ScalarK]]) -> list[int]:
    """Elementary-divisor exponents over R of a nonsingular square matrix."""
    A = [row[:] for row in entries]
    out: list[int] = []
    while A:
        best, bi, bj = INF, -1, -1
        for i, row in enumerate(A):
            for j, x in enumerate(row):
                v = x.val()
                if v < best:
                    best, bi, bj = v, i, j
        if best == INF:
            raise ValueError("singular matrix")
        p = A[bi][bj]
        prow = A[bi]
        newA = []
        for i, row in enumerate(A):
            if i == bi:
                continue
            q = row[bj] / p
            newA.append([row[j] - q * prow[j] if not q.is_zero() else row[j]
                         for j in range(len(row)) if j != bj])
        out.append(int(best))
        A = newA
    return sorted(out)


def relative_position(M: Lattice | LatticeClass, N: Lattice | LatticeClass) -> tuple[int, ...]:
    """Elementary-divisor exponents of M^{-1} N, shifted so the first is 0."""
    M, N = as_lattice(M), as_lattice(N)
    coords = [M.coords(c) for c in N.cols]
    ex = _smith_exponents([list(row) for row in zip(*coords)])
    return tuple(e - ex[0] for e in ex)


def equivalent(M: Lattice | LatticeClass, N: Lattice | LatticeClass) -> bool:
    return all(e == 0 for e in relative_position(M, N))


def incident(M: Lattice | LatticeClass, N: Lattice | LatticeClass) -> bool:
    """Distinct classes with zM ⊂ N ⊂ M after rescaling."""
    rp = relative_position(M, N)
    if rp[-1] == 0:
        raise SameClass("lattices define the same class")
    return rp[-1] <= 1


# ---------------------------------------------------------------------------
# scaling into a lattice


def theta_exponent(M: Lattice | LatticeClass, theta: Sequence[ScalarK] | Lattice | LatticeClass) -> int:
    """The integer a with z^a Θ ⊂ M and z^a Θ ⊄ zM."""
    M = as_lattice(M)
    if isinstance(theta, (Lattice, LatticeClass)):
        return -M.order_of(as_lattice(theta))
    o = M.order(theta)
    if o == INF:
        raise ValueError("theta must be nonzero")
    return -int(o)


def theta_limit(M: Lattice | LatticeClass, theta):
    """Θ^M = z^a Θ: a vector for a vector argument, a Lattice otherwise."""
    a = theta_exponent(M, theta)
    if isinstance(theta, (Lattice, LatticeClass)):
        return as_lattice(theta).scale(a)
    za = as_lattice(M).field.z(a)
    return tuple(za * x for x in theta)


def lattice_sum(M: Lattice | LatticeClass, N: Lattice | LatticeClass) -> LatticeClass:
    """Class of M + N for the representatives as given."""
    return (as_lattice(M) + as_lattice(N)).cls()


# ---------------------------------------------------------------------------
# convex hull


def _scaled_sums(M: Lattice, N: Lattice) -> list[LatticeClass]:
    """Classes [z^a M + N] for the integers a where neither summand absorbs the other."""
    lo = M.order_of(N)                              # N ⊂ z^a M  iff  a <= lo
    hi = -N.order_of(M)                             # z^a M ⊂ N  iff  a >= hi
    out = []
    for a in range(lo + 1, hi):
        out.append((M.scale(a) + N).cls())
    return out


def convex_hull(classes: Iterable[LatticeClass]) -> list[LatticeClass]:
    """Smallest set containing ``classes`` and closed under [z^a M + N].

    For a pair M, N only the integers a with N ⊄ z^a M and z^a M ⊄ N can
    produce a new class, and that range is computed exactly from the
    containment orders; the closure is iterated to a fixpoint.
    """
    found = {c.key: c for c in classes}
    if not found:
        raise ValueError("convex hull of the empty set")
    done: list[LatticeClass] = []
    todo = sorted_classes(found.values())
    while todo:
        c = todo.pop(0)
        for d in done:
            for s in _scaled_sums(c.rep, d.rep):
                if s.key not in found:
                    found[s.key] = s
                    todo.append(s)
        done.append(c)
    return sorted_classes(found.values())


def is_convex(classes: Iterable[LatticeClass]) -> bool:
    cs = sorted_classes(classes)
    keys = {c.key for c in cs}
    for a, b in combinations(cs, 2):
        for s in _scaled_sums(a.rep, b.rep):
            if s.key not in keys:
                return False
    return True


# ---------------------------------------------------------------------------
# simplices


@dataclass(frozen=True)
class BuildingSimplex:
    """Flag zM_m = M_0 ⊂ M_1 ⊂ ... ⊂ M_m of concrete lattices."""

    flag: tuple[Lattice, ...]

    @property
    def top(self) -> Lattice:
        return self.flag[-1]

    @property
    def lattices(self) -> tuple[Lattice, ...]:
        """M_1, ..., M_m."""
        return self.flag[1:]

    @property
    def vertices(self) -> list[LatticeClass]:
        return [L.cls() for L in self.flag[1:]]

    @property
    def dim(self) -> int:
        return len(self.flag) - 2


def simplex_of(classes: Iterable[LatticeClass]) -> BuildingSimplex | None:
    """The flag of a pairwise-incident set of classes, else None."""
    cs = sorted_classes(classes)
    if not cs:
        raise ValueError("empty vertex set")
    for a, b in combinations(cs, 2):
        if not incident(a, b):
            return None
    top = cs[0].rep
    reps = [theta_limit(top, c.rep) for c in cs[1:]]
    reps.sort(key=lambda L: -L.colength())
    flag = [top.scale(1)] + reps + [top]
    for a, b in zip(flag, flag[1:]):
        if not (a < b):
            return None
    return BuildingSimplex(tuple(flag))


def pairwise_incident_subsets(classes: Sequence[LatticeClass]) -> list[tuple[LatticeClass, ...]]:
    """All nonempty cliques of the incidence graph, in canonical order."""
    cs = sorted_classes(classes)
    n = len(cs)
    adj = [[False] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        adj[i][j] = adj[j][i] = incident(cs[i], cs[j])
    out: list[tuple[LatticeClass, ...]] = []

    def grow(clique: list[int], start: int) -> None:
        out.append(tuple(cs[i] for i in clique))
        for j in range(start, n):
            if all(adj[i][j] for i in clique):
                grow(clique + [j], j + 1)

    for i in range(n):
        grow([i], i + 1)
    return out


# ---------------------------------------------------------------------------
# residues


@dataclass(frozen=True)
class ResidueSubspace:
    """A k-subspace of Λ/zΛ, given by an echelon basis in Λ's canonical coordinates."""

    ambient: LatticeClass
    basis: tuple[tuple, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def key(self) -> tuple:
        return tuple(tuple(kstr(x) for x in row) for row in self.basis)

    def __add__(self, other: "ResidueSubspace") -> "ResidueSubspace":
        return _subspace(self.ambient, list(self.basis) + list(other.basis))

    def __le__(self, other: "ResidueSubspace") -> bool:
        f = self.ambient.field
        return krank(list(self.basis) + list(other.basis), f) == other.dim

    def __lt__(self, other: "ResidueSubspace") -> bool:
        return self <= other and self.dim < other.dim

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": [list(r) for r in self.key]}


def _subspace(ambient: LatticeClass, rows: list) -> ResidueSubspace:
    R, _ = krref(rows, ambient.field)
    return ResidueSubspace(ambient, tuple(tuple(r) for r in R))


def image_mod_z(L: Lattice | LatticeClass, vectors: Iterable[Sequence[ScalarK]]) -> list[tuple]:
    """Reductions mod zL of vectors lying in L, in L's canonical coordinates."""
    L = as_lattice(L)
    out = []
    for v in vectors:
        c = L.coords(v)
        out.append(tuple(x.at_zero() for x in c))
    return out


def residue(Lam: LatticeClass | Lattice, M) -> ResidueSubspace:
    """Image of M^Λ in Λ/zΛ, for a vector or lattice M."""
    lam = as_lattice(Lam)
    amb = lam.cls() if isinstance(Lam, Lattice) else Lam
    lim = theta_limit(lam, M)
    gens = lim.cols if isinstance(lim, Lattice) else [lim]
    return _subspace(amb, image_mod_z(lam, gens))


def star_residues(sigma: BuildingSimplex, Y: Iterable[LatticeClass]) -> dict[int, list[ResidueSubspace]]:
    """Place each [N] in Y into one quotient M_i/M_{i-1} of the flag.

    The image is the subspace (M^{M_m} + M_{i-1}) / zM_i of M_i/zM_i, which
    contains the image of M_{i-1}; the index i is the least one with
    N^{M_m} ⊂ M_i.
    """
    flag = sigma.flag
    top = flag[-1]
    out: dict[int, list[ResidueSubspace]] = {i: [] for i in range(1, len(flag))}
    for N in sorted_classes(Y):
        Nt = theta_limit(top, N.rep)
        i = next(j for j in range(1, len(flag)) if flag[j].contains_lattice(Nt))
        Mi = flag[i]
        gens = list(Nt.cols) + list(flag[i - 1].cols)
        sub = _subspace(Mi.cls(), image_mod_z(Mi, gens))
        if sub not in out[i]:
            out[i].append(sub)
    return out


# ---------------------------------------------------------------------------
# uniformizer extension


def _substitute(L: Lattice, m: int) -> list[VectorK]:
    return [tuple(x.substitute_power(m) for x in c) for c in L.cols]


def _quotient_lifts(Mi: Lattice, Mprev: Lattice) -> list[VectorK]:
    """Basis vectors of M_i lifting a basis of M_i / M_{i-1}."""
    W = image_mod_z(Mi, Mprev.cols)
    _, piv = krref(W, Mi.field)
    return [Mi.cols[j] for j in range(Mi.r) if j not in piv]


def extend_uniformizer_data(sigma: BuildingSimplex, m: int) -> tuple[LatticeClass, int]:
    """(N, rank of the assembled residue map) after z -> t^m, ω = t."""
    if m < sigma.top.r:
        raise ValueError("m must be at least r")
    field = sigma.top.field
    gens: list[VectorK] = []
    for i, L in enumerate(sigma.lattices):
        wi = field.z(i)
        gens += [tuple(wi * x for x in c) for c in _substitute(L, m)]
    N = Lattice.from_generators(gens, field)
    images: list[VectorK] = []
    for i in range(1, len(sigma.flag)):
        wi = field.z(i - 1)
        for v in _quotient_lifts(sigma.flag[i], sigma.flag[i - 1]):
            images.append(tuple(wi * x.substitute_power(m) for x in v))
    rk = krank(image_mod_z(N, images), field)
    return N.cls(), rk


def extend_uniformizer(sigma: BuildingSimplex, m: int) -> LatticeClass:
    """Class of N = M_1' + ωM_2' + ... over k((t)), t^m = z, ω = t.

    The returned class is written in the variable t.  The assembled residue
    map onto N/tN is checked to be an isomorphism.
    """
    N, rk = extend_uniformizer_data(sigma, m)
    if rk != sigma.top.r:
        raise ArithmeticError(f"residue map has rank {rk}, expected {sigma.top.r}")
    return N
