import pytest

from engines.homology import (
    GF2,
    RATIONALS,
    FieldSpec,
    SimplicialComplex,
    matrix_rank,
    parse_field,
    reduced_euler_characteristic,
    reduced_homology_dims,
)

GF3 = FieldSpec("prime", 3)

# six-vertex triangulation of the real projective plane
RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
       (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]


def complex_of(n, facets):
    return SimplicialComplex(n, frozenset(frozenset(f) for f in facets))


@pytest.mark.parametrize("text, label", [
    ("gf2", "gf2"),
    ("Q", "q"),
    ("rationals", "q"),
    ("gfp:3", "gfp:3"),
    ("gfp:2", "gf2"),
])
def test_parse_field(text, label):
    assert parse_field(text).label == label


@pytest.mark.parametrize("text", ["gf4", "gfp:4", "gfp:x", "reals"])
def test_parse_field_rejects(text):
    with pytest.raises(ValueError):
        parse_field(text)


def test_field_names():
    assert str(GF2) == "GF(2)"
    assert str(RATIONALS) == "QQ"
    assert RATIONALS.characteristic == 0


@pytest.mark.parametrize("field, expected", [(GF2, 0), (GF3, 1), (RATIONALS, 1)])
def test_rank_depends_on_characteristic(field, expected):
    assert matrix_rank([{0: 2}], 1, field) == expected


@pytest.mark.parametrize("field", [GF2, GF3, RATIONALS])
def test_rank_of_dependent_rows(field):
    rows = [{0: 1, 1: 1}, {0: 1, 1: 1}, {2: 1}]
    assert matrix_rank(rows, 3, field) == 2
    assert matrix_rank([], 3, field) == 0


def test_complex_keeps_facets_only():
    complex_ = complex_of(3, [(1, 2), (1,), (2, 3)])
    assert complex_.facets == frozenset({frozenset({1, 2}), frozenset({2, 3})})
    assert complex_.dimension == 1
    assert complex_.contains((2,))
    assert not complex_.contains((1, 3))
    with pytest.raises(ValueError):
        complex_of(2, [(1, 3)])


def test_faces_by_dimension():
    layers = complex_of(3, [(1, 2), (3,)]).faces_by_dimension()
    assert layers == [[()], [(1,), (2,), (3,)], [(1, 2)]]


@pytest.mark.parametrize("field", [GF2, RATIONALS])
def test_circle_and_points(field):
    circle = complex_of(3, [(1, 2), (2, 3), (1, 3)])
    assert reduced_homology_dims(circle, field) == [0, 0, 1]
    assert reduced_homology_dims(complex_of(2, [(1,), (2,)]), field) == [0, 1]
    assert reduced_homology_dims(complex_of(3, [(1, 2, 3)]), field) == [0, 0, 0, 0]


def test_void_and_empty_face_complexes():
    assert reduced_homology_dims(SimplicialComplex(0, frozenset()), GF2) == []
    assert reduced_homology_dims(complex_of(0, [()]), GF2) == [1]


def test_torsion_shows_only_in_characteristic_two():
    rp2 = complex_of(6, RP2)
    assert reduced_homology_dims(rp2, GF2) == [0, 0, 1, 1]
    assert reduced_homology_dims(rp2, RATIONALS) == [0, 0, 0, 0]
    assert reduced_homology_dims(rp2, GF3) == [0, 0, 0, 0]


def test_euler_characteristic_matches_homology():
    rp2 = complex_of(6, RP2)
    layers = rp2.faces_by_dimension()
    assert reduced_euler_characteristic(layers) == 0
    homology = reduced_homology_dims(rp2, RATIONALS)
    assert sum((-1) ** (k + 1) * h for k, h in enumerate(homology)) == 0


def test_induced_subcomplex():
    circle = complex_of(3, [(1, 2), (2, 3), (1, 3)])
    assert reduced_homology_dims(circle.induced([1, 3]), GF2) == [0, 0, 0]
