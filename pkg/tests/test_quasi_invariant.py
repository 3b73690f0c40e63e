from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infbraid.crossed_modules import E_LETTER, F_LETTER, K_LETTER, form_letter, poly_letter
from infbraid.enveloping import Tensor
from infbraid.quasi_invariant import (
    c_r_term,
    casimir_like,
    convention_diagnostic,
    coherence_defect,
    cyclic_sum,
    phi_pairing_check,
    phi_pairing_value,
    string_tensor,
    trivial_tensor,
    validate_tensor,
    xi0_form,
)

f, k, e = F_LETTER, K_LETTER, E_LETTER
one = poly_letter(0)


def test_string_tensor_is_quasi_invariant(tensor):
    bad = validate_tensor(tensor, degree_bound=4)
    assert not any(bad.values()), bad


def test_verbatim_sign_fails_bracket_condition(space):
    bad = validate_tensor(string_tensor(space, -2, "verbatim"), degree_bound=3)
    assert bad["iii"] == ["[f,k]", "[f,e]", "[k,e]"]
    assert not bad["i"] and not bad["ii"]


def test_casimir_is_symmetric(engine):
    r = casimir_like(engine)
    assert r == r.flip()
    assert len(r) == 3


def test_asymmetric_r_is_rejected(space):
    q = trivial_tensor(space, Tensor.elementary(space.engine, (e,), (f,)))
    assert validate_tensor(q, 2)["symmetry"]


def test_coherence_only_at_minus_two(space):
    assert coherence_defect(string_tensor(space, -2)).is_zero()
    for c in (0, 2, Fraction(-1, 2)):
        assert not coherence_defect(string_tensor(space, c)).is_zero()


@given(st.fractions(min_value=-6, max_value=6, max_denominator=5))
def test_coherence_defect_is_affine_in_c(space, c):
    # the defect is (c + 2) times the cyclic sum of 1 (x) r
    unit = cyclic_sum(c_r_term(string_tensor(space, 1)))
    d = coherence_defect(string_tensor(space, c))
    assert space.equal(d, unit.scale(c + 2), "rewrite")


def test_convention_diagnostic(tensor):
    assert convention_diagnostic(tensor) == {"cohP": 2, "defTr": -2}


def test_phi_pairing(model, engine):
    # sum Phi(s_i, f, e) (x) t_i = 1 (x) [f, e] = 1 (x) 2k
    assert phi_pairing_value(model, engine, f, e) == Tensor.elementary(engine, (one,), (k,), coeff=2)
    assert not any(phi_pairing_check(model, engine).values())


@pytest.mark.parametrize("shift", [1, Fraction(-3, 2)])
def test_primitive_choice_is_irrelevant(space, shift):
    for m in range(3):
        h = form_letter(m)
        assert space.equal(xi0_form(space, h), xi0_form(space, h, shift))


def test_trivial_model_tensor(trivial_space):
    q = trivial_tensor(trivial_space)
    assert not any(validate_tensor(q, 2).values())
