import json
import random
from itertools import combinations, combinations_with_replacement

import pytest

from utils import graph_core
from utils.errors import HypothesisError, IdealFormatError
from utils.ideal_core import (
    Monomial,
    MonomialIdeal,
    colon_by_linear_difference,
    edge_ideal,
    format_monomial,
    ideal_to_json,
    minimalize,
    parse_ideal,
    parse_monomial,
    stretch,
    stretch_ideal,
    stretch_until_squarefree,
)


def m(*indices):
    return Monomial.from_indices(*indices)


def test_parse_and_format_monomials():
    product = parse_monomial("x1^2*x4^3*x7")
    assert product == parse_monomial("x1^2x4^3x7")
    assert product.exponent_map == {1: 2, 4: 3, 7: 1}
    assert product.degree == 6
    assert format_monomial(product) == "x1^2*x4^3*x7"
    assert format_monomial(parse_monomial("1")) == "1"
    assert parse_monomial("1").degree == 0


@pytest.mark.parametrize("text", ["", "y1", "x", "x1^", "x0"])
def test_parse_monomial_rejects(text):
    with pytest.raises(IdealFormatError):
        parse_monomial(text)


def test_divides_and_lcm():
    assert m(1, 2).divides(m(1, 1, 2, 3))
    assert not m(1, 1).divides(m(1, 2))
    assert m(1, 1, 2).lcm(m(2, 2, 3)) == parse_monomial("x1^2*x2^2*x3")
    assert m(2, 1).indices() == [1, 2]


def test_minimalize_and_ideal_properties():
    ideal = minimalize([m(1, 2), m(1, 2, 3), m(3), m(2, 3)])
    assert [format_monomial(g) for g in ideal.gens] == ["x3", "x1*x2"]
    assert ideal.ambient_n == 3
    assert ideal.is_squarefree
    assert ideal.contains(m(1, 2, 4)) is True
    assert ideal.supports() == [frozenset({3}), frozenset({1, 2})]
    with pytest.raises(IdealFormatError):
        MonomialIdeal(3, (m(1), m(1, 2)))
    with pytest.raises(IdealFormatError):
        MonomialIdeal(2, (m(3),))


def test_edge_ideal(p3):
    ideal = edge_ideal(p3)
    assert str(ideal) == "(x1*x2, x2*x3)"
    assert ideal.ambient_n == 3


def test_stretch_single_monomials():
    assert stretch(m(1, 3, 5)) == m(1, 4, 7)
    assert stretch(parse_monomial("x1^2*x4^3*x7")) == m(1, 2, 6, 7, 8, 12)
    assert stretch(m(3), 5) == m(3)
    assert stretch(m(2, 2), 3) == m(2, 5)
    with pytest.raises(ValueError):
        stretch(m(1, 2), 0)


def test_stretch_ideal_minimal_ring():
    ideal = parse_ideal("x1*x3*x5, x1^2*x4^3*x7")
    stretched = stretch_ideal(ideal, 1)
    assert str(stretched) == "(x1*x4*x7, x1*x2*x6*x7*x8*x12)"
    assert stretched.ambient_n == 12
    assert stretched.is_squarefree


def test_stretch_ideal_degree_bound_ring():
    ideal = minimalize([m(1, 3, 5), parse_monomial("x1^2*x4^3*x7")], 9)
    stretched = stretch_ideal(ideal, 1, ambient="degree_bound")
    assert stretched.ambient_n == 14
    with pytest.raises(ValueError):
        stretch_ideal(ideal, 1, ambient="huge")


def test_stretch_edge_ideal_of_path(p3):
    assert str(stretch_ideal(edge_ideal(p3), 1)) == "(x1*x3, x2*x4)"


def test_stretch_until_squarefree():
    t, ideal = stretch_until_squarefree(parse_ideal("x1^2, x2*x3"))
    assert t == 1
    assert str(ideal) == "(x1*x2, x2*x4)"
    assert stretch_until_squarefree(parse_ideal("x1*x2"))[0] == 0


def test_colon_by_linear_difference():
    path = graph_core.path_graph(5)
    colon = colon_by_linear_difference(path, 1, 5)
    assert [format_monomial(g) for g in colon.gens] == ["x1*x2", "x2*x3", "x2*x4", "x3*x4", "x4*x5"]
    with pytest.raises(HypothesisError):
        colon_by_linear_difference(graph_core.path_graph(3), 1, 3)


def test_parse_ideal_forms():
    assert parse_ideal("(x1*x2, x2*x3)") == parse_ideal("x1x2\nx2x3")
    zero = parse_ideal("(0)")
    assert zero.is_zero and str(zero) == "(0)"
    document = json.dumps({"n": 5, "gens": ["x1*x2"]})
    parsed = parse_ideal(document)
    assert parsed.ambient_n == 5
    assert parse_ideal(json.dumps(ideal_to_json(parsed))) == parsed
    with pytest.raises(IdealFormatError):
        parse_ideal('{"gens": ["x1"]}')


@pytest.mark.parametrize("t", [1, 2, 3])
def test_stretch_is_injective_at_fixed_degree(t):
    for degree in range(1, 5):
        monomials = [m(*indices) for indices in combinations_with_replacement(range(1, 6), degree)]
        images = [stretch(u, t) for u in monomials]
        assert len(set(images)) == len(monomials)
        assert all(image.degree == degree for image in images)


def test_stretches_compose_at_safe_gaps():
    rng = random.Random(31)
    for _ in range(50):
        s, t = rng.randint(1, 3), rng.randint(1, 3)
        degree = rng.randint(1, 4)
        indices, last = [], 0
        for _ in range(degree):
            last += rng.randint(s + t + 1, s + t + 4)
            indices.append(last)
        u = m(*indices)
        assert stretch(stretch(u, t), s) == stretch(u, s + t)


def test_random_ideals_become_squarefree():
    rng = random.Random(37)
    for _ in range(30):
        gens = []
        for _ in range(rng.randint(1, 4)):
            gens.append(Monomial(tuple((rng.randint(1, 5), rng.randint(1, 3)) for _ in range(rng.randint(1, 3)))))
        t, stretched = stretch_until_squarefree(minimalize(gens))
        assert stretched.is_squarefree
        if t:
            assert stretched == stretch_ideal(minimalize(gens), t)


def test_colon_is_the_edge_ideal_exactly_when_products_are_edges(small_graphs):
    checked = 0
    for graph in small_graphs:
        for x, y in combinations(graph.vertices, 2):
            if graph.closed_neighborhood(x) & graph.closed_neighborhood(y):
                continue
            products_are_edges = all(
                graph.has_edge(z, w) for z in graph.neighbors(x) for w in graph.neighbors(y)
            )
            assert (colon_by_linear_difference(graph, x, y) == edge_ideal(graph)) == products_are_edges
            checked += 1
    assert checked > 500
