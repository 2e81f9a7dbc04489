import pytest

from arrlimit import fixtures
from arrlimit.matroid import validate_witness


@pytest.mark.parametrize("name", fixtures.names())
def test_shipped_json_matches_builder(name):
    assert fixtures.load_json(name) == fixtures.build_json(name)


@pytest.mark.parametrize("name", ["brianchon_pascal", "hesse_dual", "fano_f2", "octahedron_planes_4_8"])
def test_witnesses_are_valid(name):
    C, I = fixtures.load(name)
    assert len(validate_witness(C, I)) == len(I)


def test_counts():
    assert len(fixtures.pappus_lines()[1]) == 9
    assert len(fixtures.hesse_dual()[1]) == 12
    assert len(fixtures.fano_f2()[1]) == 7
    assert len(fixtures.octahedron_planes_4_8()[1]) == 12


def test_generic_generator():
    F = fixtures.load("generic_4_7")
    assert (F.r, F.n) == (4, 7) and F.dependent_subsets() == []
    assert fixtures.is_fixture("generic_2_3") and not fixtures.is_fixture("generic_x")


def test_hesse_requires_cube_root():
    with pytest.raises(ValueError):
        fixtures.hesse_dual(11, 3)
