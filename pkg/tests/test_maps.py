import random

import pytest

from comeas.exact import QQ, DimensionMismatch, FieldSpec, Matrix, rank
from comeas.maps import (ActionShapeMap, CoactionShapeMap, OperatorSubspace, Relation, apply_tau, compare, cosupp,
                         cosupp_included, generic_map_of_subspace, supp)
from comeas.duality import witness_coaction
from comeas.omega import standard_algebra
from oracles import sympy_rank


def random_rho(rng, a=None, b=None, q=None):
    a, b, q = a or rng.randint(1, 4), b or rng.randint(1, 4), q or rng.randint(1, 4)
    coords = [[[rng.randint(-2, 2) for _ in range(q)] for _ in range(a)] for _ in range(b)]
    return CoactionShapeMap.from_coords(QQ, coords, q)


def random_subspace(rng, a, b):
    k = rng.randint(0, a * b)
    mats = [Matrix(QQ, b, a, [[rng.randint(-1, 1) for _ in range(a)] for _ in range(b)]) for _ in range(k)]
    return OperatorSubspace.span(QQ, a, b, mats)


def test_supp_examples():
    rho = CoactionShapeMap.from_coords(QQ, [[[1, 0]]], 2)
    assert len(supp(rho)) == 1
    zero = CoactionShapeMap.from_coords(QQ, [[[0, 0]]], 2)
    assert supp(zero) == []


def test_supp_of_witness_rho3():
    a = standard_algebra("nilpotent_span_algebra", FieldSpec("Fp", 13), N=6)
    assert len(supp(witness_coaction(a, 3).rho)) == 3


def test_cosupp_of_action():
    psi = ActionShapeMap.from_operators([Matrix.identity(QQ, 2)])
    assert cosupp(psi).same_as(OperatorSubspace.span(QQ, 2, 2, [Matrix.identity(QQ, 2)]))


def test_cosupp_diagonal_example():
    rho = CoactionShapeMap.from_coords(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], 2)
    want = OperatorSubspace.span(QQ, 2, 2, [Matrix.from_rows(QQ, [[1, 0], [0, 0]]),
                                             Matrix.from_rows(QQ, [[0, 0], [0, 1]])])
    assert cosupp(rho).same_as(want)


def test_supp_equals_cosupp_dimension(rng):
    for _ in range(40):
        rho = random_rho(rng)
        flat = [[rho.q(b, a)[k] for b in range(rho.b_dim) for a in range(rho.a_dim)] for k in range(rho.qdim)]
        assert len(supp(rho)) == cosupp(rho).dim == sympy_rank(flat, rho.a_dim * rho.b_dim)


def test_compare_identical():
    rho = CoactionShapeMap.from_coords(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], 2)
    c = compare(rho, rho)
    assert c.relation is Relation.EQUIVALENT
    assert c.tau == Matrix.identity(QQ, 2)


def test_compare_coarser_example():
    rho2 = CoactionShapeMap.from_coords(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], 2)
    rho1 = CoactionShapeMap.from_coords(QQ, [[[1], [0]], [[0], [1]]], 1)
    c = compare(rho1, rho2)
    assert c.relation is Relation.COARSER
    assert c.tau == Matrix.from_rows(QQ, [[1, 1]])
    assert rank(c.tau) == 1
    assert apply_tau(c.tau, rho2, rho1).rows == rho1.rows
    assert compare(rho2, rho1).relation is Relation.FINER


def test_compare_incomparable():
    rho1 = CoactionShapeMap.from_coords(QQ, [[[1], [0]], [[0], [0]]], 1)
    rho2 = CoactionShapeMap.from_coords(QQ, [[[0], [0]], [[0], [1]]], 1)
    assert compare(rho1, rho2).relation is Relation.INCOMPARABLE


def test_compare_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        compare(CoactionShapeMap.from_coords(QQ, [[[1]]], 1), CoactionShapeMap.from_coords(QQ, [[[1, 0]]], 1))


def test_compare_agrees_with_inclusion(rng):
    for _ in range(40):
        rho2 = random_rho(rng)
        if rng.random() < 0.5:
            # push rho2 through a random linear map so that rho1 is coarser
            q1 = rng.randint(1, 4)
            t = [[rng.randint(-1, 1) for _ in range(rho2.qdim)] for _ in range(q1)]
            coords = [[[sum(t[i][k] * rho2.q(b, a)[k] for k in range(rho2.qdim)) for i in range(q1)]
                       for a in range(rho2.a_dim)] for b in range(rho2.b_dim)]
            rho1 = CoactionShapeMap.from_coords(QQ, coords, q1)
        else:
            rho1 = random_rho(rng, rho2.a_dim, rho2.b_dim)
        c = compare(rho1, rho2)
        factors = c.relation in (Relation.COARSER, Relation.EQUIVALENT)
        assert factors == cosupp_included(rho1, rho2)
        if factors:
            assert apply_tau(c.tau, rho2, rho1).rows == rho1.rows
            assert rank(c.tau) == len(supp(rho1))
        if c.relation is Relation.EQUIVALENT:
            assert c.tau.rows == c.tau.cols == rank(c.tau)


def test_generic_map_of_identity():
    v = OperatorSubspace.span(QQ, 2, 2, [Matrix.identity(QQ, 2)])
    rho = generic_map_of_subspace(v)
    assert rho.q(0, 0) == [1] and rho.q(1, 1) == [1] and rho.q(0, 1) == [0]
    assert len(supp(rho)) == 1


def test_generic_map_full_hom():
    v = OperatorSubspace.full(QQ, 1, 2)
    assert len(supp(generic_map_of_subspace(v))) == 2


def test_generic_map_round_trip(rng):
    for _ in range(20):
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        v = random_subspace(rng, a, b)
        assert cosupp(generic_map_of_subspace(v)).same_as(v)
        assert len(supp(generic_map_of_subspace(v))) == v.dim


def test_subspace_rejects_dependent_basis():
    with pytest.raises(ValueError):
        OperatorSubspace(QQ, 1, 1, (Matrix.identity(QQ, 1), Matrix.identity(QQ, 1).scale(2)))


def test_json_round_trips():
    rho = CoactionShapeMap.from_coords(QQ, [[["1/2", 0]], [[0, -3]]], 2)
    assert CoactionShapeMap.from_json(rho.to_json(), QQ) == rho
    psi = ActionShapeMap.from_operators([Matrix.from_rows(QQ, [[1, 2], [3, 4]])])
    assert ActionShapeMap.from_json(psi.to_json(), QQ) == psi
    v = OperatorSubspace.full(QQ, 2, 1)
    assert OperatorSubspace.from_json(v.to_json(), QQ).same_as(v)
