import random
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from _gen import random_arrangement
from arrlimit import fixtures
from arrlimit.config import Configuration
from arrlimit.errors import IndeterminateCR, OverlapViolation, WitnessInvalid
from arrlimit.matroid import (INF, Matroid, MatroidDecomposition, MatroidPolytope,
                              PolyhedralDecomposition, aff_cohomology, central_decomposition,
                              coarsenings, cross_ratio, cross_ratio_limit,
                              decomposition_from_limits, dimension_audit, eulerian,
                              find_lax_order, hypersimplex, is_lax, is_unimodular, matroid_of, members,
                              overlaps_on_boundary, polytope_from_inequalities, tiling_witness,
                              validate_witness, verify_tiling)
from arrlimit.membrane import Arrangement
from arrlimit.scalar import QQ, parse_scalar

small_covectors = st.lists(st.tuples(*[st.integers(-2, 2)] * 3).filter(any), min_size=4, max_size=7)


def _euclidean_normalized_volume(M):
    pts = np.array([[int(x) for x in v[:-1]] for v in MatroidPolytope(M).vertices()], dtype=float)
    d = M.n - 1
    return round(ConvexHull(pts).volume * factorial(d))


# -- matroids and volumes ------------------------------------------------------------


def test_exchange_axiom_is_enforced():
    with pytest.raises(ValueError):
        Matroid.from_sets(4, [(0, 1), (2, 3)])
    assert Matroid.from_sets(4, [(0, 1), (0, 2), (1, 2)]).r == 2


@pytest.mark.parametrize("r, n, vol", [(2, 4, 4), (3, 5, 11), (3, 6, 66), (4, 8, 2416), (3, 9, 4293)])
def test_hypersimplex_volume_is_eulerian(r, n, vol):
    assert hypersimplex(r, n).normalized_volume() == vol == eulerian(n - 1, r - 1)


@settings(max_examples=40, deadline=None)
@given(small_covectors)
def test_volume_matches_convex_hull_oracle(cov):
    C = Configuration.make(cov, QQ)
    if C.rank() < 3:
        return
    M = matroid_of(C)
    if not M.is_connected():
        assert MatroidPolytope(M).dimension() < M.n - 1
        return
    assert MatroidPolytope(M).normalized_volume() == _euclidean_normalized_volume(M)


@settings(max_examples=25, deadline=None)
@given(small_covectors)
def test_facets_cut_out_the_polytope(cov):
    C = Configuration.make(cov, QQ)
    if C.rank() < 3:
        return
    M = matroid_of(C)
    P = MatroidPolytope(M)
    # facets describe P inside its affine hull, which is x_S = rk S per component
    hull = [(members(S, M.n), M.rank_of(S)) for S in M.components()]
    Q = polytope_from_inequalities(P.r, P.n, P.inequalities() + hull)
    assert Q.vertex_masks() == P.vertex_masks()


# -- tilings ---------------------------------------------------------------------


def split(I, r=2, n=4):
    """Two halves of Δ(r,n) cut along x_I = r - 1."""
    J = tuple(i for i in range(n) if i not in I)
    return MatroidDecomposition(r, n, [polytope_from_inequalities(r, n, [(I, r - 1)]),
                                       polytope_from_inequalities(r, n, [(J, r - 1)])])


@pytest.mark.parametrize("I", [(0, 1), (0, 2), (0, 3)])
def test_two_pyramid_splits(I):
    D = split(I)
    assert [P.normalized_volume() for P in D.polytopes] == [2, 2]
    assert verify_tiling(D) and is_unimodular(D)
    assert aff_cohomology(D).h1 == 0


def test_overlapping_pieces_are_not_a_tiling():
    D = MatroidDecomposition(2, 4, [hypersimplex(2, 4), polytope_from_inequalities(2, 4, [((0, 1), 1)])])
    w = tiling_witness(D)
    assert w is not None and not verify_tiling(D)


def test_missing_piece_is_not_a_tiling():
    D = MatroidDecomposition(2, 4, [polytope_from_inequalities(2, 4, [((0, 1), 1)])])
    assert not verify_tiling(D)


def test_limit_decomposition_of_the_example():
    F = fixtures.example_1_19()
    D = decomposition_from_limits(F)
    assert D.ambient is not None                  # f_1, f_4, f_5 are dependent over K
    assert verify_tiling(D) and is_unimodular(D)
    own = sorted(tuple(sorted((tuple(i + 1 for i in I), k) for I, k in D.split_inequalities(P)[0]))
                 for P in D.polytopes)
    assert own == [(((1, 5), 1),), (((2, 3, 4), 2),)]
    H = MatroidDecomposition(3, 5, [D.own_polytope(P) for P in D.polytopes])
    assert verify_tiling(H) and is_unimodular(H)


@pytest.mark.parametrize("seed", range(5))
def test_random_limit_decompositions_tile(seed):
    rng = random.Random(300 + seed)
    F = random_arrangement(rng, rng.choice([2, 3]), 5)
    D = decomposition_from_limits(F)
    assert verify_tiling(D) and is_unimodular(D)
    assert sum(P.normalized_volume() for P in D.polytopes) == hypersimplex(F.r, F.n).normalized_volume()


# -- central decompositions and lax configurations -------------------------------------


def test_central_decomposition_of_pappus():
    C, I = fixtures.pappus_lines()
    assert len(I) == 9
    D = central_decomposition(I, 3, 9)
    assert len(D.polytopes) == 10
    assert verify_tiling(D) and is_unimodular(D)
    assert overlaps_on_boundary(D)
    h = aff_cohomology(D)
    assert (h.h1, h.sizes) == (0, (10, 9, 0))


def test_central_overlap_violation():
    with pytest.raises(OverlapViolation):
        central_decomposition([(0, 1, 2), (0, 1, 3)], 3, 6)


def test_coarsenings_all_tile():
    _, I = fixtures.pappus_lines()
    subs = coarsenings(I[:3], 3, 9)
    assert len(subs) == 8
    assert all(verify_tiling(D) for _, D in subs)


def test_lax():
    C, _ = fixtures.pappus_lines()
    order = find_lax_order(C)
    assert order is not None and is_lax(C, order)
    assert find_lax_order(fixtures.grid_lines(3)) is not None
    assert find_lax_order(fixtures.grid_lines(4)) is None


# -- affine cohomology ------------------------------------------------------------------


def test_trivial_decomposition():
    h = aff_cohomology(MatroidDecomposition(3, 6, [hypersimplex(3, 6)]))
    assert h.h1 == 0 and h.torsion == ()


def test_non_regular_triangulation_regression():
    # outer triangle with a rotated inner triangle: 7 cells, the classical non-regular example
    O = [(0, 0), (4, 0), (0, 4)]
    In = [(1, 1), (2, 1), (1, 2)]
    cells = [[O[0], O[1], In[0]], [O[1], In[0], In[1]], [O[1], O[2], In[1]],
             [O[2], In[1], In[2]], [O[2], O[0], In[2]], [O[0], In[2], In[0]], In]
    h = aff_cohomology(PolyhedralDecomposition.from_vertex_lists(cells, O))
    assert (h.h0, h.h1, h.torsion) == (6, 0, (4,))


# -- cross-ratios ---------------------------------------------------------------------


def test_pencil_cross_ratio():
    F = fixtures.octahedron_2_4()
    assert cross_ratio(F, [0, 1, 2, 3], []) == parse_scalar("1 - z")
    assert cross_ratio_limit(F, [0, 1, 2, 3], []) == 1


def test_example_cross_ratio_is_degenerate():
    F = fixtures.example_1_19()
    assert cross_ratio_limit(F, [1, 2, 3, 4], [0]) == 0


def test_cross_ratio_errors():
    F = Arrangement.make([[1, 0], [1, 0], [1, 0], [0, 1]])
    with pytest.raises(IndeterminateCR):
        cross_ratio(F, [0, 1, 2, 3], [])
    with pytest.raises(ValueError):
        cross_ratio(fixtures.example_1_19(), [0, 1, 2, 3], [0])
    G = Arrangement.make([[1, 0], [0, 1], [1, 0], [1, 1]])
    assert cross_ratio(G, [0, 1, 2, 3], []) is INF


@pytest.mark.parametrize("seed", range(8))
def test_degenerate_cross_ratio_iff_broken(seed):
    # for r = 2, n = 4 the face is the whole octahedron
    F = random_arrangement(random.Random(500 + seed), 2, 4)
    lim = cross_ratio_limit(F, [0, 1, 2, 3], [])
    broken = len(decomposition_from_limits(F).polytopes) > 1
    assert (lim is INF or lim in (0, 1)) == broken


# -- dimension audits -------------------------------------------------------------------


@pytest.mark.parametrize("name, dim, lhs, rhs", [
    ("brianchon_pascal", 2, 11, 10),
    ("hesse_dual", 0, 12, 10),
    ("fano_f2", 0, 7, 6),
])
def test_audits(name, dim, lhs, rhs):
    C, I = fixtures.load(name)
    a = dimension_audit(C, I)
    assert (a.dim_XC, a.lhs, a.rhs) == (dim, lhs, rhs)
    assert a.violates


def test_octahedron_audit():
    C, I = fixtures.load("octahedron_planes_4_8")
    a = dimension_audit(C, I)
    assert len(I) == 12 and a.lhs >= 12 and a.rhs == 9


def test_invalid_witness():
    C, I = fixtures.pappus_lines()
    bad = [tuple(I[0][:2]) + (I[1][0],)] + list(I[1:])
    with pytest.raises(WitnessInvalid):
        validate_witness(C, bad)
    with pytest.raises(WitnessInvalid):
        validate_witness(C, [I[0][:2]])
