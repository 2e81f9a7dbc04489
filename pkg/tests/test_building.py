import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from _gen import brute_force_hull, random_class
from arrlimit.building import (Lattice, LatticeClass, convex_hull, extend_uniformizer,
                               extend_uniformizer_data, incident, is_convex, lattice_sum,
                               relative_position, residue, simplex_of, star_residues,
                               theta_exponent, theta_limit)
from arrlimit.errors import ParseError, SameClass
from arrlimit.scalar import QQ, parse_scalar


def vec(*xs):
    return tuple(parse_scalar(str(x)) for x in xs)


def diag(*e):
    r = len(e)
    return Lattice.from_generators([vec(*[f"z^{e[i]}" if i == j else 0 for i in range(r)])
                                    for j in range(r)], QQ)


def test_hermite_form_is_canonical():
    a = Lattice.from_generators([vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)])
    b = Lattice.from_generators([vec(1, 1, 1), vec(0, 1, 0), vec(0, 0, "1 + z")])
    assert a == b
    c = Lattice.from_generators([vec("z^-1", 1, 1), vec(0, 1, 0), vec(0, 0, 1)])
    assert c != a
    assert c.cls() == Lattice.from_generators([vec(1, "z", "z"), vec(0, "z", 0), vec(0, 0, "z")]).cls()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_class_ignores_scaling_and_generator_order(seed, k):
    rng = random.Random(seed)
    M = random_class(rng, 3)
    gens = list(M.rep.cols)
    rng.shuffle(gens)
    # an extra redundant generator and a global z^k scaling leave the class alone
    extra = tuple(a + b for a, b in zip(gens[0], gens[1]))
    zk = QQ.z(k)
    scaled = [tuple(zk * x for x in g) for g in gens + [extra]]
    assert LatticeClass.from_generators(scaled, QQ) == M


def test_relative_position_and_incidence():
    M, N = diag(0, 0, 0).cls(), diag(1, 0, 0).cls()
    assert relative_position(M, N) == (0, 0, 1)
    assert incident(M, N) and incident(N, M)
    far = diag(2, 0, 0).cls()
    assert not incident(M, far)
    with pytest.raises(SameClass):
        incident(M, diag(3, 3, 3).cls())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_incidence_is_symmetric(seed):
    rng = random.Random(seed)
    M, N = random_class(rng, 3), random_class(rng, 3)
    if M == N:
        return
    assert incident(M, N) == incident(N, M)


def test_theta_scaling():
    M = diag(0, 0)
    v = vec("z^-3 + 1", "z^2")
    a = theta_exponent(M, v)
    assert a == 3
    w = theta_limit(M, v)
    assert M.contains(w) and not M.scale(1).contains(w)


def test_lattice_sum_on_representatives():
    assert lattice_sum(diag(0, 0), diag(-1, 1)) == diag(-1, 0).cls()


def test_hull_of_two_diagonal_classes_is_a_segment():
    hull = convex_hull([diag(0, 0, 0).cls(), diag(3, 0, 0).cls()])
    assert {c for c in hull} == {diag(k, 0, 0).cls() for k in range(4)}
    assert is_convex(hull)


@pytest.mark.parametrize("corners", [
    [(0, 0, 0), (2, 0, 0), (0, 2, 0)],
    [(0, 0, 0), (3, 1, 0), (1, 0, 2)],
    [(0, 0, 0, 0), (2, 1, 0, 0), (0, 0, 1, 3)],
])
def test_hull_inside_an_apartment_is_min_plus(corners):
    # diagonal lattices add by coordinatewise minimum of exponents
    expect = set()
    for a in product(range(-4, 5), repeat=len(corners) - 1):
        shifts = (0,) + a
        e = [min(c[i] + s for c, s in zip(corners, shifts)) for i in range(len(corners[0]))]
        expect.add(diag(*e).cls())
    assert set(convex_hull([diag(*c).cls() for c in corners])) == expect


@pytest.mark.parametrize("seed", range(12))
def test_hull_matches_brute_force(seed):
    rng = random.Random(seed)
    r = rng.choice([2, 3])
    cs = [random_class(rng, r) for _ in range(rng.randint(2, 3))]
    hull = convex_hull(cs)
    assert {c.key for c in hull} == brute_force_hull(cs)
    assert is_convex(hull)


def test_non_convex_set_detected():
    assert not is_convex([diag(0, 0).cls(), diag(2, 0).cls()])


def test_simplex_flag():
    a, b, c = diag(0, 0, 0).cls(), diag(1, 0, 0).cls(), diag(1, 1, 0).cls()
    s = simplex_of([a, b, c])
    assert s is not None and s.dim == 2
    flag = s.flag
    assert all(x < y for x, y in zip(flag, flag[1:]))
    assert flag[0] == flag[-1].scale(1)
    assert set(s.vertices) == {a, b, c}
    assert simplex_of([a, diag(2, 0, 0).cls()]) is None


def test_residues_of_vectors_and_stars():
    M = diag(0, 0, 0).cls()
    assert residue(M, vec("z^-2", "z^-2", 1)).basis == ((1, 1, 0),)
    N = diag(1, 0, 0).cls()
    s = simplex_of([M, N])
    res = star_residues(s, [diag(2, 0, 0).cls()])
    assert sum(len(v) for v in res.values()) == 1


def test_uniformizer_extension_is_isomorphic_on_residues():
    a, b = diag(0, 0, 0).cls(), diag(1, 0, 0).cls()
    s = simplex_of([a, b])
    N, rk = extend_uniformizer_data(s, 3)
    assert rk == 3
    assert extend_uniformizer(s, 3) == N
    with pytest.raises(ValueError):
        extend_uniformizer(s, 2)


def test_class_json_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        M = random_class(rng, 3)
        assert LatticeClass.from_json(M.to_json(), QQ) == M


@pytest.mark.parametrize("bad", [{"matrix": "x"}, {"generators": [["1", "0"], ["1"]]}, 7])
def test_class_json_rejects_garbage(bad):
    with pytest.raises(ParseError):
        LatticeClass.from_json(bad, QQ)
