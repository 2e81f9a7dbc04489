import random

import pytest

from _gen import random_arrangement
from arrlimit import fixtures
from arrlimit.building import LatticeClass, convex_hull, extend_uniformizer, incident
from arrlimit.errors import MissingStable, NotConvex, RankNotSupported, TrivialQuotient
from arrlimit.membrane import stable_lattices
from arrlimit.scalar import QQ, parse_scalar
from arrlimit.specialfiber import (VALID_GERMS, boundary_incidence, component_model,
                                   enlarge_off_boundary, fiber_complex, independent_residues,
                                   limit_surface, quotient_map, quotient_membrane, simplex_flag,
                                   simplex_residues)


def cls(*cols):
    return LatticeClass.from_generators([tuple(parse_scalar(str(x)) for x in c) for c in cols], QQ)


M1 = cls([1, 0, 0], [0, 1, 0], [0, 0, 1])
M2 = cls(["z^-1", 0, 0], [0, 1, 0], [0, 0, 1])


@pytest.fixture(scope="module")
def example():
    return fixtures.example_1_19()


def _families():
    out = [fixtures.example_1_19(), fixtures.octahedron_2_4(), fixtures.constant_generic(3, 5),
           fixtures.germ_family("chain"), fixtures.germ_family("cycle_3")]
    rng = random.Random(41)
    out += [random_arrangement(rng, 3, 5) for _ in range(3)]
    return out


def test_example_fiber_complex(example):
    X = fiber_complex(example, stable_lattices(example))
    assert X.vertices == sorted([M1, M2])
    assert X.edges() == [(0, 1)] and X.dim == 1
    assert all(rec.disjoint for rec in X.components)
    table = boundary_incidence(example, X.vertices)
    both = sorted([M1, M2])
    assert table == {0: [M2], 1: both, 2: both, 3: both, 4: [M2]}


def test_fiber_complex_checks(example):
    far = cls(["z^-2", 0, 0], [0, 1, 0], [0, 0, 1])
    with pytest.raises(NotConvex):
        fiber_complex(example, [M1, far])
    with pytest.raises(MissingStable):
        fiber_complex(example, [M1])
    X = fiber_complex(example, [M1], check=False)
    assert X.contains_stable is None


@pytest.mark.parametrize("F", _families(), ids=lambda F: f"r{F.r}n{F.n}")
def test_fiber_complex_invariants(F):
    Y = convex_hull(stable_lattices(F))
    X = fiber_complex(F, Y)
    assert X.convex and X.contains_stable
    for s in X.simplices:
        assert len(s) <= F.r
        assert all(incident(X.vertices[a], X.vertices[b]) for a in s for b in s if a < b)
    # blowup centers of equal depth are disjoint
    assert all(rec.disjoint for rec in X.components)


@pytest.mark.parametrize("F", _families(), ids=lambda F: f"r{F.r}n{F.n}")
def test_enlarging_clears_boundary(F):
    Y = convex_hull(stable_lattices(F))
    for M in Y:
        Z = enlarge_off_boundary(F, Y, M)
        assert set(Y) <= set(Z)
        assert not any(M in Ms for Ms in boundary_incidence(F, Z).values())


def test_simplex_data(example):
    X = fiber_complex(example, stable_lattices(example))
    s = X.edges()[0]
    sigma = simplex_flag(X, s)
    assert sigma.dim == 1
    res = simplex_residues(X, s)
    assert sum(len(v) for v in res.values()) == 2
    assert extend_uniformizer(sigma, 3).r == 3


def test_quotients(example):
    q = quotient_map(example, [0])
    assert q.arrangement.r == 2 and q.kept == (1, 2, 3, 4)
    Y = stable_lattices(example)
    X = quotient_membrane(example, Y, [0])
    assert len(X.vertices) == 1
    assert X.indices == (1, 2, 3, 4)
    with pytest.raises(TrivialQuotient):
        quotient_map(example, [0, 1, 2])
    assert independent_residues(example, Y, [1, 2])


def test_example_limit_surface(example):
    S = limit_surface(example)
    kinds = sorted((len(c.blowup_points), c.kind) for c in S.components)
    assert kinds == [(0, "blowup_P2"), (1, "blowup_P2")]
    blown = next(c for c in S.components if c.blowup_points)
    assert blown.lattice == M2
    assert blown.blowup_points == [(1, 2, 3)]
    assert blown.inherited_points == [(0, 3, 4)]
    assert len(S.edges) == 1
    assert sorted(S.edges[0].curves) == ["exceptional", "line"]
    assert {g.kind for g in S.germs} == {"normal_crossing"}
    assert S.strata_vertices_agree
    assert S.degenerate_subsets == [(0, 3, 4)]


def test_component_model_of_generic_family():
    F = fixtures.constant_generic(3, 5)
    (M,) = stable_lattices(F)
    c = component_model(F, M)
    assert c.blowup_points == [] and not c.special


@pytest.mark.parametrize("kind", ["chain", "cycle_3", "cycle_4", "cycle_5", "cycle_6"])
def test_germ_fixtures(kind):
    S = limit_surface(fixtures.germ_family(kind))
    kinds = {g.kind for g in S.germs}
    assert kind in kinds
    assert kinds <= VALID_GERMS
    assert S.strata_vertices_agree


def test_surface_needs_rank_three():
    with pytest.raises(RankNotSupported):
        limit_surface(fixtures.octahedron_2_4())
