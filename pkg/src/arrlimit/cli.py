"""Command-line front end.

Every subcommand reads one JSON document (a path, or the name of a shipped
fixture), runs one computation and prints a JSON report with sorted keys.
Domain errors exit with status 1 and an ``{"error": ...}`` object; malformed
input exits with status 2.

    python -m arrlimit stab example_1_19
    python -m arrlimit gitstab --json my_family.json --out report.json
    python -m arrlimit trop verify example_1_19 --window 3
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import fixtures
from .building import LatticeClass, convex_hull, incident, is_convex, simplex_of
from .config import Configuration
from .errors import DomainError, ParseError
from .matroid import (Matroid, MatroidDecomposition, MatroidPolytope, PolyhedralDecomposition,
                      aff_cohomology, central_decomposition, cross_ratio, cross_ratio_limit,
                      decomposition_from_limits, dimension_audit, find_lax_order, is_lax,
                      is_unimodular, overlaps_on_boundary, polytope_from_inequalities, to_mask,
                      verify_tiling)
from .membrane import (Arrangement, git_stable_classes, is_git_stable, is_stable,
                       limit_configuration, norm_vector, psi, stable_lattices)
from .scalar import INF, BaseField, ScalarK
from .specialfiber import boundary_incidence, fiber_complex, limit_surface
from .tropical import verify_correspondence

SUBCOMMANDS = ("stab", "hull", "gitstab", "fiber", "surface", "trop", "audit", "cohomology",
               "lax", "central", "crossratio")


@dataclass
class JobConfig:
    subcommand: str
    input: str
    window: int | None = None     # None: the library default for that computation
    prec: int = 32
    field: str | None = None
    out: str | None = None
    V: str | None = None
    W: str | None = None
    exhaustive: bool = False

    def __post_init__(self) -> None:
        if self.window is not None and self.window < 1:
            raise ParseError("--window must be at least 1")
        if self.prec < 1:
            raise ParseError("--prec must be at least 1")


# ---------------------------------------------------------------------------
# input


def read_input(spec: str, field: str | None = None) -> dict:
    """Parse a JSON file, or fall back to a shipped fixture of that name."""
    path = Path(spec)
    if path.is_file():
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{spec}: {exc}") from None
    elif fixtures.is_fixture(spec):
        obj = fixtures.load_json(spec)
    else:
        raise ParseError(f"no such file or fixture: {spec}")
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    if field is not None:
        obj = dict(obj, base_field=BaseField.from_label(field).to_json())
    return obj


def _field(obj: dict) -> BaseField:
    return BaseField.from_json(obj.get("base_field", {"kind": "Q"}))


def _arrangement(obj: dict) -> Arrangement:
    if "vectors" not in obj:
        raise ParseError("expected an arrangement with a 'vectors' array")
    return Arrangement.from_json(obj)


def _index_sets(raw, n: int, what: str) -> list[tuple[int, ...]]:
    """1-based index lists to sorted 0-based tuples."""
    try:
        out = [tuple(sorted(int(i) - 1 for i in I)) for I in raw]
    except (TypeError, ValueError):
        raise ParseError(f"'{what}' must be a list of index lists") from None
    if any(not 0 <= i < n for I in out for i in I):
        raise ParseError(f"'{what}' has an index outside 1..{n}")
    return out


def _indices(text, n: int, what: str) -> list[int]:
    if isinstance(text, str):
        text = [t for t in text.replace(" ", "").split(",") if t]
    return list(_index_sets([text], n, what)[0]) if text is not None else []


def _classes(obj: dict, key: str) -> list[LatticeClass]:
    field = _field(obj)
    raw = obj.get(key)
    if not isinstance(raw, list):
        raise ParseError(f"'{key}' must be a list of lattice classes")
    return [LatticeClass.from_json(c, field) for c in raw]


def _value(x) -> str:
    return "inf" if x is INF else str(x)


def _series(x, prec: int) -> dict:
    if not isinstance(x, ScalarK):
        return {}
    return {str(e): str(c) for e, c in sorted(x.series(prec).items())}


# ---------------------------------------------------------------------------
# subcommands


def cmd_stab(obj: dict, job: JobConfig) -> dict:
    F = _arrangement(obj)
    classes = stable_lattices(F)
    return {
        "count": len(classes),
        "classes": [{"lattice": M.to_json(), "psi": list(psi(F, M)),
                     "norm_vector": list(norm_vector(F, M)),
                     "limit": limit_configuration(F, M).to_json()} for M in classes],
        "pairwise_incident": all(incident(a, b) for i, a in enumerate(classes)
                                 for b in classes[i + 1:]),
        "degenerate_subsets": [[i + 1 for i in T] for T in F.dependent_subsets()],
    }


def cmd_hull(obj: dict, job: JobConfig) -> dict:
    if "classes" in obj:
        given = _classes(obj, "classes")
    else:
        given = stable_lattices(_arrangement(obj))
    if not given:
        raise ParseError("no classes given")
    hull = convex_hull(given)
    return {"input": [M.to_json() for M in given], "hull": [M.to_json() for M in hull],
            "size": len(hull), "convex": is_convex(hull), "simplex": simplex_of(hull) is not None}


def _decomposition_report(D: MatroidDecomposition) -> dict:
    out = {"decomposition": D.to_json(), "tiles": verify_tiling(D), "unimodular": is_unimodular(D)}
    if D.ambient is not None:
        # the own inequalities alone cut Δ(r,n) into the same number of pieces
        own = [D.own_polytope(P) for P in D.polytopes]
        ok = all(P is not None for P in own)
        Dh = MatroidDecomposition(D.r, D.n, own) if ok else None
        out["hypersimplex_tiles"] = bool(ok and verify_tiling(Dh))
        out["hypersimplex_unimodular"] = bool(ok and is_unimodular(Dh))
    return out


def cmd_gitstab(obj: dict, job: JobConfig) -> dict:
    F = _arrangement(obj)
    classes = git_stable_classes(F, job.window)
    D = decomposition_from_limits(F, job.window)
    out = _decomposition_report(D)
    out["classes"] = [{"lattice": M.to_json(), "psi": list(psi(F, M)),
                       "stable": is_stable(F, M), "git_stable": is_git_stable(F, M)}
                      for M in classes]
    return out


def cmd_fiber(obj: dict, job: JobConfig) -> dict:
    F = _arrangement(obj)
    Y = _classes(obj, "Y") if "Y" in obj else convex_hull(stable_lattices(F))
    X = fiber_complex(F, Y)
    table = boundary_incidence(F, X.vertices)
    return {"complex": X.to_json(), "dim": X.dim,
            "boundary": {str(i + 1): [X.index(M) + 1 for M in Ms] for i, Ms in table.items()}}


def cmd_surface(obj: dict, job: JobConfig) -> dict:
    return limit_surface(_arrangement(obj), job.window).to_json()


def cmd_trop(obj: dict, job: JobConfig) -> dict:
    F = _arrangement(obj)
    window = 2 if job.window is None else job.window
    rep = verify_correspondence(F, window, exhaustive=job.exhaustive)
    return dict(rep.to_json(), window=window, exhaustive=job.exhaustive)


def _configuration(obj: dict) -> Configuration:
    if "covectors" not in obj and "vectors" not in obj:
        raise ParseError("expected a configuration with a 'covectors' array")
    return Configuration.from_json(obj)


def cmd_audit(obj: dict, job: JobConfig) -> dict:
    C = _configuration(obj)
    I = _index_sets(obj["I"], C.n, "I") if "I" in obj else None
    return dimension_audit(C, I).to_json()


def _polytope(p: dict, r: int, n: int) -> MatroidPolytope:
    if "bases" in p:
        bases = _index_sets(p["bases"], n, "bases")
        try:
            return MatroidPolytope(Matroid(n, r, frozenset(to_mask(B) for B in bases)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    ineqs = [(_indices(q["I"], n, "I"), int(q["rhs"])) for q in p.get("inequalities", [])]
    try:
        return polytope_from_inequalities(r, n, ineqs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _matroid_decomposition(obj: dict) -> MatroidDecomposition:
    try:
        r, n = int(obj["r"]), int(obj["n"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("decomposition needs integer 'r' and 'n'") from None
    if "I" in obj:
        return central_decomposition(_index_sets(obj["I"], n, "I"), r, n)
    polys = [_polytope(p, r, n) for p in obj.get("polytopes", [{}])]
    ambient = None
    if obj.get("ambient_nonbases"):
        non = {to_mask(T) for T in _index_sets(obj["ambient_nonbases"], n, "ambient_nonbases")}
        bases = frozenset(P for P in MatroidPolytope(Matroid.uniform(r, n)).vertex_masks()
                          if P not in non)
        ambient = Matroid(n, r, bases)
    return MatroidDecomposition(r, n, polys, ambient)


def cmd_cohomology(obj: dict, job: JobConfig) -> dict:
    if "cells" in obj:
        try:
            D = PolyhedralDecomposition.from_vertex_lists(obj["cells"], obj["ambient"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad cell decomposition: {exc}") from None
        return aff_cohomology(D).to_json()
    D = _matroid_decomposition(obj)
    return dict(aff_cohomology(D).to_json(), tiles=verify_tiling(D), unimodular=is_unimodular(D))


def cmd_lax(obj: dict, job: JobConfig) -> dict:
    C = _configuration(obj)
    order = find_lax_order(C)
    out = {"lax": order is not None, "order": None if order is None else [i + 1 for i in order]}
    if "order" in obj:
        given = _indices(obj["order"], C.n, "order")
        if sorted(given) != list(range(C.n)):
            raise ParseError("'order' must be a permutation of 1..n")
        out["given_order_lax"] = is_lax(C, given)
    return out


def cmd_central(obj: dict, job: JobConfig) -> dict:
    if "covectors" in obj:
        C = _configuration(obj)
        obj = {"r": C.r, "n": C.n, "I": obj.get("I", [[i + 1 for i in I] for I in C.multiple_points()])}
    if "I" not in obj:
        raise ParseError("central check needs 'I'")
    D = _matroid_decomposition(obj)
    out = _decomposition_report(D)
    out["overlaps_on_boundary"] = overlaps_on_boundary(D)
    out["h1"] = aff_cohomology(D).h1
    return out


def cmd_crossratio(obj: dict, job: JobConfig) -> dict:
    F = _arrangement(obj) if "vectors" in obj else _configuration(obj)
    V = _indices(job.V if job.V is not None else obj.get("V"), F.n, "V")
    W = _indices(job.W if job.W is not None else obj.get("W"), F.n, "W")
    try:
        cr = cross_ratio(F, V, W)
        lim = cross_ratio_limit(F, V, W)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    field = F.field
    return {"V": [i + 1 for i in V], "W": [i + 1 for i in W], "value": _value(cr),
            "series": _series(cr, job.prec), "limit": _value(lim),
            "degenerate": lim is INF or lim == field.zero or lim == field.one}


HANDLERS: dict[str, Callable[[dict, JobConfig], dict]] = {
    "stab": cmd_stab, "hull": cmd_hull, "gitstab": cmd_gitstab, "fiber": cmd_fiber,
    "surface": cmd_surface, "trop": cmd_trop, "audit": cmd_audit, "cohomology": cmd_cohomology,
    "lax": cmd_lax, "central": cmd_central, "crossratio": cmd_crossratio,
}


# ---------------------------------------------------------------------------
# entry points


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(job: JobConfig) -> tuple[int, dict]:
    """Exit status and report (or error object) for one job."""
    try:
        obj = read_input(job.input, job.field)
        return 0, HANDLERS[job.subcommand](obj, job)
    except DomainError as exc:
        return 1, exc.to_json()
    except ParseError as exc:
        return 2, {"error": "parse_error", "message": str(exc)}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", dest="json_path", metavar="PATH", help="input JSON file")
    common.add_argument("--window", type=int, help="enumeration window (trop default 2)")
    common.add_argument("--prec", type=int, default=32, help="series terms in reports")
    common.add_argument("--field", metavar="Q|Fp:<p>", help="override the base field")
    common.add_argument("--out", metavar="PATH", help="write the report here")

    p = argparse.ArgumentParser(prog="arrlimit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "trop":
            sp.add_argument("action", choices=["verify"])
        sp.add_argument("input", nargs="?", help="JSON file or fixture name")
        if name == "trop":
            sp.add_argument("--exhaustive", action="store_true",
                            help="Hermite-reduce every window point")
        if name == "crossratio":
            sp.add_argument("--V", help="four indices, e.g. 2,3,4,5")
            sp.add_argument("--W", help="r-2 indices")
    p.add_argument("--list-fixtures", action="store_true", help=argparse.SUPPRESS)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv == ["--list-fixtures"]:
        sys.stdout.write(dumps({"fixtures": fixtures.names()}))
        return 0
    p = _parser()
    ns = p.parse_args(argv)
    source = ns.json_path or ns.input
    if source is None:
        p.error("an input file or fixture name is required")
    try:
        job = JobConfig(ns.subcommand, source, ns.window, ns.prec, ns.field, ns.out,
                        getattr(ns, "V", None), getattr(ns, "W", None),
                        getattr(ns, "exhaustive", False))
    except ParseError as exc:
        sys.stdout.write(dumps({"error": "parse_error", "message": str(exc)}))
        return 2
    status, report = run(job)
    text = dumps(report)
    if job.out and status == 0:
        Path(job.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
