from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from infbraid import kz_forms as kz
from infbraid.algebra_core import perm_from_cycles, perm_identity, perm_product
from infbraid.enveloping import Tensor

labels = st.integers(1, 5)
gens = st.tuples(labels, labels).filter(lambda p: p[0] != p[1])
monos = st.lists(gens, min_size=1, max_size=3).map(tuple)
elements = st.dictionaries(monos, st.integers(-3, 3).filter(bool), max_size=4)


def esym(k, xs):
    out = 0
    for c in combinations(xs, k):
        p = 1
        for v in c:
            p *= v
        out += p
    return out


def add(a, b, s=1):
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + s * c
    return {m: c for m, c in out.items() if c}


def test_anticommutativity():
    assert kz.normal_mono([(1, 2), (1, 2)]) == {}
    assert kz.normal_mono([(2, 1)]) == {((1, 2),): 1}
    assert kz.normal_mono([(2, 3), (1, 2)]) == {((1, 2), (2, 3)): -1}


def test_arnold_relation():
    e = {((1, 2), (2, 3)): 1, ((2, 3), (3, 1)): 1, ((3, 1), (1, 2)): 1}
    assert kz.wedge_normalize(e) == {}
    # the printed degree-2 family in terms of the broken-circuit basis
    assert kz.normal_mono([(2, 3), (3, 1)]) == {((1, 2), (1, 3)): 1, ((1, 2), (2, 3)): -1}


def test_quadruple_basis_is_normal():
    basis = kz.quadruple_basis(1, 2, 3, 4)
    assert sorted(basis) == kz.normal_basis(4, 3)
    assert all(kz.is_normal(m) for m in basis)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dimensions(n):
    # Poincare polynomial (1 + t)(1 + 2t)...(1 + (n-1)t)
    for k in range(n):
        assert len(kz.normal_basis(n, k)) == esym(k, range(1, n))


@given(elements)
def test_normalize_is_idempotent(e):
    once = kz.wedge_normalize(e)
    assert kz.wedge_normalize(once) == once
    assert all(kz.is_normal(m) for m in once)
    degrees = {len(m) for m in e}
    assert {len(m) for m in once} <= degrees


@given(elements, elements)
def test_normalize_is_linear(a, b):
    lhs = kz.wedge_normalize(add(a, b, 2))
    rhs = add(kz.wedge_normalize(a), kz.wedge_normalize(b), 2)
    assert lhs == rhs


def test_connection_shapes(pq3, pq4, braid):
    assert kz.build_connection(braid.pq(2), 2).B == {}
    assert len(kz.build_connection(pq3, 3).B) == 2
    c4 = kz.build_connection(pq4, 4)
    assert len(c4.A) == 6 and len(c4.B) == 8
    with pytest.raises(ValueError):
        kz.build_connection(pq3, 1)


def test_curvature_vanishes_for_one_pair(braid):
    assert kz.curvature(kz.build_connection(braid.pq(2), 2)) == {}


def test_fake_flatness_n3(pq3):
    conn = kz.build_connection(pq3, 3)
    assert kz.fake_curvature_defect(conn) == {}
    assert kz.curvature(conn)


def test_matrix_transcription():
    assert kz.matrix_checksum(kz.M_TRANSCRIBED) == "911a96d016b078f5"
    res = kz.matrix_identities()
    assert res["rank_M"] == 6 and res["rank_N"] == 6
    assert res["M_matches_forms"] and res["NM_matches_display"]
    assert res["all_rows_matched"]
    row5 = kz.NM_TRANSCRIBED[4]
    assert {j + 1 for j, v in enumerate(row5) if v} == {2, 8, 17, 19}
    assert {v for v in row5 if v} == {1}


def test_rank_helper():
    assert kz.rank([[1, 2], [2, 4]]) == 1
    assert kz.rank([[Fraction(1, 2), 0], [0, 3]]) == 2


def test_symbolic_curvature_equals_MV():
    assert kz.symbolic_equals_MV(4) == []
    assert len(kz.display_terms(1, 2, 3, 4)) == 24


def test_two_curvature_vanishes_n4(pq4):
    conn = kz.build_connection(pq4, 4)
    assert kz.fake_curvature_defect(conn) == {}
    assert kz.two_curvature(conn) == {}


def test_two_curvature_detects_wrong_c(space):
    from infbraid.braiding2 import build_braiding
    from infbraid.quasi_invariant import string_tensor

    b = build_braiding(string_tensor(space, 0), check=False)
    conn = kz.build_connection(b.pq(4), 4)
    assert kz.fake_curvature_defect(conn) == {}
    assert kz.two_curvature(conn)


def test_identity_pullback(pq3):
    conn = kz.build_connection(pq3, 3)
    same = kz.sn_pullback(perm_identity(3), conn)
    assert kz.connection_defect(same, conn) == {"A": [], "B": []}


@pytest.mark.parametrize("cycle", [(1, 2), (1, 3), (2, 3), (1, 2, 3)])
def test_sn_invariance(pq3, cycle):
    conn = kz.build_connection(pq3, 3)
    sigma = perm_from_cycles(3, cycle)
    assert kz.connection_defect(kz.sn_pullback(sigma, conn), conn) == {"A": [], "B": []}


def test_pullback_is_an_action(pq3):
    conn = kz.build_connection(pq3, 3)
    # perturb so the action is visible
    conn.B[((1, 2), (1, 3))] = pq3.space.element(
        Tensor.elementary(pq3.space.engine, ((2, 1),), (), ((0, 2),)))
    s, t = perm_from_cycles(3, (1, 2)), perm_from_cycles(3, (1, 2, 3))
    twice = kz.sn_pullback(t, kz.sn_pullback(s, conn))
    # functional composition s o t is perm_product(t, s) in the left-to-right convention
    once = kz.sn_pullback(perm_product(t, s), conn)
    assert kz.connection_defect(twice, once) == {"A": [], "B": []}
    assert kz.connection_defect(kz.sn_pullback(s, conn), conn)["B"]


def test_asymmetric_coefficients_break_invariance(pq3):
    conn = kz.build_connection(pq3, 3)
    conn.A[((1, 2),)] = conn.A[((1, 2),)] + Tensor.elementary(pq3.space.engine, ((0, 2),), ((0, 1),), ())
    d = kz.connection_defect(kz.sn_pullback(perm_from_cycles(3, (1, 2)), conn), conn)
    assert d["A"]
