import random

import pytest

from infbraid.braiding2 import (
    build_braiding,
    categorified_four_term,
    check_axioms,
    check_totally_symmetric,
    coherence_defects,
    jacobi_defect,
    perturbed,
    symm_pq_defects,
)
from infbraid.enveloping import Tensor
from infbraid.quasi_invariant import string_tensor, trivial_tensor
from infbraid.samplers import random_un
from infbraid.two_category import braiding, compose_one, identity, is_valid


def family(sp, b):
    mors = {"id1": identity(sp, 1), "r11": b.r(1, 1), "B11": braiding(sp, 1, 1),
            "rB": compose_one(b.r(1, 1), braiding(sp, 1, 1))}
    return mors, {"P": b.P(), "Q": b.Q()}


def test_r_is_valid(braid):
    for n, m in [(1, 1), (1, 2), (2, 1)]:
        assert is_valid(braid.r(n, m), 3)


def test_boundaries_of_P_and_Q(pq3):
    r = pq3.r_at
    assert pq3.P.beta() == r("23").commutator(r("12") + r("13"))
    assert pq3.Q.beta() == r("12").commutator(r("13") + r("23"))


def test_P_and_Q_targets(braid):
    assert is_valid(braid.P().target(), 3)
    assert is_valid(braid.Q().target(), 3)


def test_axioms(space, braid):
    mors, twos = family(space, braid)
    rep = check_axioms(braid, mors, twos, objects=(1,), degree_bound=2, max_arity=3)
    assert rep.ok(), rep.failures()
    sym = check_totally_symmetric(braid, mors, objects=(1,), degree_bound=2, max_arity=3)
    assert sym.ok(), sym.failures()


def test_coherence_identities(pq3):
    assert all(v.is_zero() for v in coherence_defects(pq3).values())
    assert all(v.is_zero() for v in symm_pq_defects(pq3).values())


def test_jacobi_depends_on_c(space, pq3):
    assert jacobi_defect(pq3).is_zero()
    b0 = build_braiding(string_tensor(space, 0), check=False)
    assert len(jacobi_defect(b0.pq(3))) > 0


def test_categorified_four_term(pq4):
    rels = categorified_four_term(pq4)
    assert sorted(rels) == [f"nat{i}" for i in range(1, 7)]
    assert all(v.is_zero() for v in rels.values())
    assert categorified_four_term(pq4, "verbatim")["nat1"] == rels["nat1"]
    with pytest.raises(ValueError):
        categorified_four_term(pq4.braiding.pq(3))


def test_perturbation_is_detected(space, pq4):
    rng = random.Random(7)
    for _ in range(5):
        delta = random_un(space, 3, rng, terms=2)
        if delta.is_zero():
            continue
        broken = categorified_four_term(perturbed(pq4, delta))
        assert any(not v.is_zero() for v in broken.values())


def test_trivial_model_has_zero_P_and_Q(trivial_braid):
    assert trivial_braid.P().T.is_zero()
    assert trivial_braid.Q().T.is_zero()
    pq = trivial_braid.pq(4)
    assert all(v.is_zero() for v in categorified_four_term(pq).values())


def test_build_braiding_validates(space):
    bad = trivial_tensor(space, Tensor.elementary(space.engine, ((0, 2),), ((0, 0),)))
    with pytest.raises(ValueError):
        build_braiding(bad)
