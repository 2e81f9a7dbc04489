"""Hyperplane configurations over the base field k.

A configuration is a list of nonzero covectors in k^r, each standing for
the hyperplane it cuts out in P^{r-1}.  Covectors are stored projectively
normalized (first nonzero coordinate 1) so that coincident hyperplanes are
literally equal tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParseError
from .scalar import QQ, BaseField, kdet, knullspace, krank, kstr, projective_normalize


@dataclass(frozen=True)
class Configuration:
    """n hyperplanes in P^{r-1} over k, given by covectors."""

    r: int
    covectors: tuple[tuple, ...]
    field: BaseField = QQ

    @classmethod
    def make(cls, covectors: Iterable[Sequence], field: BaseField = QQ) -> "Configuration":
        vs = [tuple(field.elem(x) for x in v) for v in covectors]
        if not vs:
            raise ValueError("empty configuration")
        r = len(vs[0])
        if any(len(v) != r for v in vs):
            raise ValueError("covectors of different lengths")
        if any(all(x == 0 for x in v) for v in vs):
            raise ValueError("zero covector")
        return cls(r, tuple(projective_normalize(v, field) for v in vs), field)

    @property
    def n(self) -> int:
        return len(self.covectors)

    def rank(self, idx: Iterable[int] | None = None) -> int:
        rows = [self.covectors[i] for i in (range(self.n) if idx is None else idx)]
        return krank(rows, self.field) if rows else 0

    def is_basis(self, idx: Sequence[int]) -> bool:
        return kdet([self.covectors[i] for i in idx], self.field) != 0

    def coincidences(self) -> list[tuple[int, ...]]:
        """Groups of indices carrying the same hyperplane (only groups of size > 1)."""
        groups: dict[tuple, list[int]] = {}
        for i, v in enumerate(self.covectors):
            groups.setdefault(v, []).append(i)
        return sorted(tuple(g) for g in groups.values() if len(g) > 1)

    def distinct(self) -> list[int]:
        """First index of each distinct hyperplane."""
        seen: dict[tuple, int] = {}
        for i, v in enumerate(self.covectors):
            seen.setdefault(v, i)
        return sorted(seen.values())

    def to_json(self) -> dict:
        return {"r": self.r, "field": self.field.to_json(),
                "covectors": [[kstr(x) for x in v] for v in self.covectors]}

    @classmethod
    def from_json(cls, obj: dict) -> "Configuration":
        try:
            field = BaseField.from_json(obj.get("base_field", obj.get("field", {"kind": "Q"})))
            vs = obj.get("covectors", obj.get("vectors"))
            return cls.make([[field.elem(str(x)) for x in v] for v in vs], field)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"bad configuration: {exc}") from None

    # -- stability --------------------------------------------------------------

    def is_stable(self) -> bool:
        """Some r+1 covectors have every r of them independent."""
        d = self.distinct()
        for S in combinations(d, self.r + 1):
            if all(self.is_basis(T) for T in combinations(S, self.r)):
                return True
        return False

    def stabilizer_dimension(self) -> int:
        """dim of {A in gl_r : A^T v_i is a multiple of v_i for all i}."""
        r, n, f = self.r, self.n, self.field
        rows = []
        nvar = r * r + n
        for i, v in enumerate(self.covectors):
            for q in range(r):
                row = [f.zero] * nvar
                for p in range(r):
                    row[p * r + q] = v[p]
                row[r * r + i] = -v[q]
                rows.append(row)
        return nvar - krank(rows, f)

    def is_git_stable(self) -> bool:
        """Only scalars preserve the configuration (Lie algebra test)."""
        return self.stabilizer_dimension() == 1

    # -- multiple points ------------------------------------------------------

    def point_through(self, idx: Sequence[int]):
        """The point cut out by hyperplanes ``idx`` if they meet in a single point."""
        rows = [self.covectors[i] for i in idx]
        ker = knullspace(rows, self.field, self.r)
        if len(ker) != 1:
            return None
        return projective_normalize(ker[0], self.field)

    def incident(self, point: Sequence) -> tuple[int, ...]:
        f = self.field
        return tuple(i for i, v in enumerate(self.covectors)
                     if sum((a * b for a, b in zip(v, point)), f.zero) == 0)

    def points(self, min_mult: int) -> list[tuple[tuple, tuple[int, ...]]]:
        """Points lying on at least ``min_mult`` distinct hyperplanes.

        Returns (normalized point, indices of all hyperplanes through it),
        sorted by the index sets.
        """
        d = self.distinct()
        found: dict[tuple, tuple[int, ...]] = {}
        for S in combinations(d, self.r - 1):
            p = self.point_through(S)
            if p is None or p in found:
                continue
            inc = self.incident(p)
            if len({self.covectors[i] for i in inc}) >= min_mult:
                found[p] = inc
        return sorted(found.items(), key=lambda kv: kv[1])

    def multiple_points(self) -> list[tuple[int, ...]]:
        """Index sets I_a of points of multiplicity at least r."""
        return [inc for _, inc in self.points(self.r)]
