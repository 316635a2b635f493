"""Exact *-algebra arithmetic: units, products, tensoring, grading."""

import json
import random
from fractions import Fraction

import pytest

from ckgraph import (
    AlgebraError,
    Element,
    GaussianRational,
    Graph,
    edge_generator,
    element_from_json,
    element_to_json,
    right_tensor,
    star_lambda,
    star_splice,
    unit,
    vertex_projection,
)

from helpers import corpus, random_element, random_scalar

ARROW = Graph(["v", "w"], [("e", "v", "w")])
TWO_LOOPS = Graph(["v"], [("e", "v", "v"), ("f", "v", "v")])
FAN = Graph(["v", "w"], [("e1", "v", "w"), ("e2", "v", "w")])


def test_gaussian_rational_field_ops():
    a = GaussianRational(Fraction(1, 2), Fraction(3))
    b = GaussianRational(0, 1)
    assert a * b == GaussianRational(-3, Fraction(1, 2))
    assert (a / b) * b == a
    assert a.conjugate().conjugate() == a
    assert (a - a).is_zero()


def test_unit_requires_matching_range():
    mu = ARROW.make_path(["e"])
    with pytest.raises(AlgebraError):
        unit(ARROW, mu, ARROW.vertex_path("v"))
    el = unit(ARROW, mu, ARROW.vertex_path("w"))
    assert len(el.terms) == 1


def test_unit_examples():
    assert not unit(ARROW, ARROW.make_path(["e"]), ARROW.make_path(["e"])).is_zero()
    assert not vertex_projection(ARROW, "v").is_zero()
    g = FAN
    with pytest.raises(AlgebraError):
        unit(g, g.make_path(["e1"]), g.vertex_path("v"))


def test_adjoint_swaps_and_conjugates():
    se = edge_generator(ARROW, "e")
    assert se.adjoint().adjoint() == se
    t = next(iter(se.adjoint().terms))
    assert t.mu.is_vertex and t.nu.edges == ("e",)
    scaled = se.scale(GaussianRational(0, 1))
    back = scaled.adjoint()
    assert next(iter(back.terms.values())) == GaussianRational(0, -1)


def test_additive_inverse():
    rng = random.Random(3)
    for g in corpus(10):
        a = random_element(rng, g)
        assert (a + (-a)).is_zero()
        assert a.scale(0).is_zero()


def test_cross_graph_arithmetic_rejected():
    a = vertex_projection(ARROW, "v")
    b = vertex_projection(TWO_LOOPS, "v")
    with pytest.raises(AlgebraError):
        a + b
    with pytest.raises(AlgebraError):
        star_splice(a, b)


def test_star_examples_partial_isometries():
    se = edge_generator(ARROW, "e")
    theta_ee = unit(ARROW, ARROW.make_path(["e"]), ARROW.make_path(["e"]))
    pw = vertex_projection(ARROW, "w")
    assert star_lambda(se, se.adjoint()) == theta_ee
    assert star_lambda(se.adjoint(), se) == pw
    s1, s2 = edge_generator(FAN, "e1"), edge_generator(FAN, "e2")
    assert star_lambda(s1, s2).is_zero()
    assert star_lambda(s1.adjoint(), s2).is_zero()


def test_star_splice_projection_examples():
    se = edge_generator(TWO_LOOPS, "e")
    theta_ee = star_splice(se, se.adjoint())
    pv = vertex_projection(TWO_LOOPS, "v")
    assert star_splice(pv, theta_ee) == theta_ee
    pw = vertex_projection(ARROW, "w")
    assert star_splice(vertex_projection(ARROW, "v"), pw).is_zero()


def test_toeplitz_relations_symbolically():
    for g in (ARROW, TWO_LOOPS, FAN):
        for e in sorted(g.edges):
            se = edge_generator(g, e)
            assert star_splice(se.adjoint(), se) == vertex_projection(g, g.dst(e))
            for f in sorted(g.edges):
                if f != e:
                    assert star_splice(se.adjoint(), edge_generator(g, f)).is_zero()
        for v in g.sorted_vertices():
            total = Element.zero(g)
            for e in g.out_edges(v):
                se = edge_generator(g, e)
                total = total + star_splice(se, se.adjoint())
            assert star_splice(total, total) == total
            pv = vertex_projection(g, v)
            assert star_splice(pv, star_splice(total, pv)) == total


def test_right_tensor_examples():
    pv = vertex_projection(FAN, "v")
    expected = unit(FAN, FAN.make_path(["e1"]), FAN.make_path(["e1"])) + unit(
        FAN, FAN.make_path(["e2"]), FAN.make_path(["e2"])
    )
    assert right_tensor(pv, 1) == expected
    assert right_tensor(vertex_projection(FAN, "w"), 1).is_zero()
    rng = random.Random(5)
    a = random_element(rng, TWO_LOOPS)
    assert right_tensor(a, 0) == a


def test_component_and_degree_examples():
    se = edge_generator(ARROW, "e")
    assert se.component(1, 0) == se
    assert se.component(0, 0).is_zero()
    theta = unit(TWO_LOOPS, TWO_LOOPS.make_path(["e"]), TWO_LOOPS.make_path(["e"]))
    mixed = vertex_projection(TWO_LOOPS, "v") + theta
    assert mixed.degree_component(0) == mixed
    assert se.degree_component(-1).is_zero()
    assert mixed.degrees() == [0]
    assert sorted(mixed.bidegrees()) == [(0, 0), (1, 1)]


def test_lambda_and_splice_products_agree():
    rng = random.Random(101)
    checked = 0
    for g in corpus(25):
        for _ in range(8):
            a, b = random_element(rng, g), random_element(rng, g)
            assert star_lambda(a, b) == star_splice(a, b)
            checked += 1
    assert checked == 200


def test_star_associative_on_random_triples():
    rng = random.Random(103)
    for g in corpus(20):
        for _ in range(6):
            a = random_element(rng, g, max_terms=3)
            b = random_element(rng, g, max_terms=3)
            c = random_element(rng, g, max_terms=3)
            assert star_lambda(star_lambda(a, b), c) == star_lambda(a, star_lambda(b, c))
            assert star_splice(star_splice(a, b), c) == star_splice(a, star_splice(b, c))


def test_adjoint_antimultiplicative_and_involutive():
    rng = random.Random(107)
    for g in corpus(20):
        for _ in range(6):
            a, b = random_element(rng, g), random_element(rng, g)
            assert star_splice(a, b).adjoint() == star_splice(b.adjoint(), a.adjoint())
            assert a.adjoint().adjoint() == a


def test_right_tensor_is_a_star_homomorphism():
    rng = random.Random(109)
    for g in corpus(20):
        for _ in range(5):
            a, b = random_element(rng, g), random_element(rng, g)
            assert right_tensor(star_splice(a, b), 1) == star_splice(
                right_tensor(a, 1), right_tensor(b, 1)
            )
            assert right_tensor(a.adjoint(), 1) == right_tensor(a, 1).adjoint()


def test_grading_respects_products():
    rng = random.Random(113)
    for g in corpus(15):
        for _ in range(4):
            a, b = random_element(rng, g), random_element(rng, g)
            prod = star_splice(a, b)
            for k in prod.degrees() + [0, 1]:
                expected = Element.zero(g)
                for i in a.degrees():
                    expected = expected + star_splice(
                        a.degree_component(i), b.degree_component(k - i)
                    )
                assert prod.degree_component(k) == expected


def test_element_json_round_trip_byte_exact():
    rng = random.Random(127)
    for g in corpus(15):
        a = random_element(rng, g).scale(random_scalar(rng))
        blob = json.dumps(element_to_json(a))
        again = element_from_json(g, json.loads(blob))
        assert again == a
        assert json.dumps(element_to_json(again)) == blob


def test_element_json_rejects_malformed():
    with pytest.raises(AlgebraError):
        element_from_json(ARROW, [{"mu": [], "nu": [], "coeff": {"re": "1", "im": "0"}}])
    with pytest.raises(AlgebraError):
        element_from_json(ARROW, [{"mu": ["e"], "coeff": {"re": "1", "im": "0"}}])
    with pytest.raises(AlgebraError):
        element_from_json(
            ARROW, [{"mu": ["e"], "nu": ["e"], "coeff": {"re": "1/0", "im": "0"}}]
        )
