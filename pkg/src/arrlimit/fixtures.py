"""Named configurations and arrangements used by examples, tests and the CLI.

Each builder constructs its object from a classical recipe.  The same data
ships as JSON under ``fixtures/`` so that command-line users can pass it
by name or by path; ``load`` reads those files.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources

from .config import Configuration
from .membrane import Arrangement
from .scalar import QQ, BaseField


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _primitive(v):
    """Scale a rational 3-vector to coprime integers."""
    from math import gcd, lcm

    v = [Fraction(x) for x in v]
    den = lcm(*[x.denominator for x in v])
    w = [int(x * den) for x in v]
    g = gcd(*w)
    w = [x // g for x in w]
    first = next(x for x in w if x)
    return tuple(-x for x in w) if first < 0 else tuple(w)


def example_1_19() -> Arrangement:
    """Five vectors in K^3 with two stable lattices."""
    return Arrangement.make([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], ["z^-1", 1, 1]])


def octahedron_2_4() -> Arrangement:
    """r = 2: (1,0), (0,1), (1,1), (1,z).  Its limit splits the octahedron Δ(2,4)."""
    return Arrangement.make([[1, 0], [0, 1], [1, 1], [1, "z"]])


def constant_generic(r: int = 3, n: int = 5) -> Arrangement:
    """Constant vectors with every r of them independent (moment curve)."""
    return Arrangement.make([[(i + 1) ** j for j in range(r)] for i in range(n)])


def pappus_lines() -> tuple[Configuration, list[tuple[int, ...]]]:
    """Nine lines with nine triple points, dual to the Pappus configuration.

    Points A_i on y = 0 and B_j on y = 1; C_ij = A_iB_j ∩ A_jB_i.  The nine
    points become covectors and the nine Pappus lines become triple points.
    """
    A = [(0, 0, 1), (1, 0, 1), (3, 0, 1)]
    B = [(0, 1, 1), (2, 1, 1), (7, 1, 1)]

    def meet(p, q, s, t):
        return _cross3(_cross3(p, q), _cross3(s, t))

    C = {(i, j): meet(A[i], B[j], A[j], B[i]) for i, j in ((0, 1), (0, 2), (1, 2))}
    pts = [_primitive(p) for p in A + B + [C[0, 1], C[0, 2], C[1, 2]]]
    conf = Configuration.make(pts, QQ)
    return conf, conf.multiple_points()


def hesse_dual(p: int = 13, omega: int = 3) -> tuple[Configuration, list[tuple[int, ...]]]:
    """Lines dual to the nine flexes of x^3 + y^3 + z^3 over F_p (omega a cube root of 1)."""
    field = BaseField(p)
    if pow(omega, 3, p) != 1 or omega % p == 1:
        raise ValueError("omega must be a primitive cube root of unity mod p")
    pts = []
    for k in range(3):
        w = pow(omega, k, p)
        pts += [(0, 1, -w), (1, 0, -w), (1, -w, 0)]
    conf = Configuration.make(pts, field)
    return conf, conf.multiple_points()


def fano_f2() -> tuple[Configuration, list[tuple[int, ...]]]:
    """The seven lines of P^2(F_2)."""
    pts = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1) if (a, b, c) != (0, 0, 0)]
    conf = Configuration.make(pts, BaseField(2))
    return conf, conf.multiple_points()


def octahedron_planes_4_8() -> tuple[Configuration, list[tuple[int, ...]]]:
    """The eight face planes ±x ± y ± z = w of the octahedron in P^3."""
    pts = [(a, b, c, -1) for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    conf = Configuration.make(pts, QQ)
    return conf, conf.multiple_points()


def six_planes() -> Configuration:
    """x1, x2, x3, x4, x1+x2+x3, x2+x3+x4 in P^3: GIT-stable, not stable."""
    return Configuration.make([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1],
                               [1, 1, 1, 0], [0, 1, 1, 1]], QQ)


def grid_lines(m: int) -> Configuration:
    """6m - 2 lines: x = i, y = j, x - y = c, x + y = c through the m x m grid."""
    cov = [(1, 0, -i) for i in range(m)] + [(0, 1, -j) for j in range(m)]
    cov += [(1, -1, -c) for c in range(-(m - 1), m)]
    cov += [(1, 1, -c) for c in range(2 * m - 1)]
    return Configuration.make(cov, QQ)


# r = 3 families whose limit surfaces realize each germ type; found by a
# seeded random search over coefficients a*z^e + b*z^f
_GERM_VECTORS = {
    "chain": [["z^-1 + z", "-2 - 2*z", "0"], ["-3*z + 2*z^2", "-2*z^-2 - 3*z^-1", "-3*z^2"],
              ["-2*z^-1 + 2*z^2", "-1", "6*z^2"], ["2*z + 2*z^2", "z^-2", "2*z^-2"],
              ["-z^-1", "z^-2", "z^-1 - 3*z^2"]],
    "cycle_3": [["3*z^2", "1", "z^-1 + 2*z"], ["-2", "3*z^-2 - 2*z^2", "-3*z^-2 + 3"],
                ["-z^-2", "-3*z^-2 - 2", "-2*z"], ["3*z^-2 - z^2", "2", "z"],
                ["-1", "z^-2 - 3", "1"], ["-z^-1 + 3*z^2", "z^2", "-3*z^-2 + z"]],
    "cycle_4": [["z^-1", "2*z", "0"], ["-3*z^2", "-2", "z^-2 + z^-1"],
                ["z^-2 + 2*z^2", "-3*z^2", "-2 - 3*z"], ["-3*z^-1 + z", "-z^-1 - 3*z", "2*z"],
                ["-2 - 2*z", "6*z^-1", "z^2"], ["-z^-2 + 3*z^-1", "3*z^-1", "2*z^-1"]],
    "cycle_5": [["2*z^-1 - 2*z^2", "2*z^-2 + 2*z", "3*z^-2 - 3*z^-1"], ["-3*z^2", "-2*z^-2", "-2*z^-2"],
                ["0", "-z^-1 - 2", "-z"], ["2*z^2", "-z^-2 - 3*z", "-z^2"],
                ["-2*z^-2 + z^-1", "3*z^-2", "6*z^-1"], ["2*z^-1 - 2", "-z", "z + 3*z^2"]],
    "cycle_6": [["-2 + 3*z^2", "2*z^-1 - 2", "3*z^-1 - 3*z^2"],
                ["2*z^-2 + 2", "-2*z^-2 - 2*z", "-3*z^-1 - z^2"], ["3 - z", "-4*z^2", "2*z^-2 + 3*z"],
                ["-z^2", "-2*z^-2 - 3*z", "-2*z - 3*z^2"], ["-3*z^-2 + 3*z", "-3*z^-2 + z^2", "0"],
                ["-2*z", "-3*z^-2 + 3*z^-1", "0"]],
}


def germ_family(kind: str) -> Arrangement:
    """An r = 3 family whose limit surface has a germ of the given kind."""
    return Arrangement.make(_GERM_VECTORS[kind])


# ---------------------------------------------------------------------------
# shipped JSON


BUILDERS = {
    "example_1_19": ("arrangement", example_1_19),
    "octahedron_2_4": ("arrangement", octahedron_2_4),
    "brianchon_pascal": ("central", pappus_lines),
    "hesse_dual": ("central", hesse_dual),
    "fano_f2": ("central", fano_f2),
    "octahedron_planes_4_8": ("central", octahedron_planes_4_8),
    "six_planes": ("configuration", six_planes),
    **{f"germ_{k}": ("arrangement", lambda k=k: germ_family(k)) for k in _GERM_VECTORS},
}

_GENERIC = re.compile(r"generic_(\d+)_(\d+)$")


def _kind(name: str) -> str:
    if _GENERIC.match(name):
        return "arrangement"
    if name not in BUILDERS:
        raise KeyError(name)
    return BUILDERS[name][0]


def build_json(name: str) -> dict:
    m = _GENERIC.match(name)
    if m:
        return constant_generic(int(m[1]), int(m[2])).to_json()
    kind, fn = BUILDERS[name]
    if kind == "arrangement":
        return fn().to_json()
    if kind == "configuration":
        out = fn().to_json()
        out["base_field"] = out.pop("field")
        return out
    conf, I = fn()
    out = conf.to_json()
    out["base_field"] = out.pop("field")
    out["I"] = [[i + 1 for i in Ia] for Ia in I]
    return out


def names() -> list[str]:
    return sorted(BUILDERS)


def is_fixture(name: str) -> bool:
    return name in BUILDERS or bool(_GENERIC.match(name))


def load_json(name: str) -> dict:
    """Shipped JSON; ``generic_{r}_{n}`` is generated on demand."""
    if _GENERIC.match(name):
        return build_json(name)
    text = resources.files("arrlimit").joinpath("fixtures", f"{name}.json").read_text()
    return json.loads(text)


def load(name: str):
    """Arrangement, or (Configuration, I-list with 0-based indices)."""
    obj = load_json(name)
    kind = _kind(name)
    if kind == "arrangement":
        return Arrangement.from_json(obj)
    conf = Configuration.from_json(obj)
    if kind == "configuration":
        return conf
    return conf, [tuple(i - 1 for i in I) for I in obj["I"]]


def write_all(directory) -> None:
    """Regenerate the shipped JSON files."""
    from pathlib import Path

    d = Path(directory)
    for name in names():
        (d / f"{name}.json").write_text(json.dumps(build_json(name), indent=1) + "\n")
