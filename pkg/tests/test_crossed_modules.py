import json
from fractions import Fraction
from itertools import permutations

import pytest

from infbraid.crossed_modules import (
    E_LETTER,
    F_LETTER,
    K_LETTER,
    SL2_LETTERS,
    ModelError,
    StringModel,
    alpha_cocycle,
    check_crossed_module,
    coboundary,
    form_letter,
    godbillon_vey,
    killing_form,
    lie_derivative,
    load_model,
    parse_model,
    poly_letter,
    q_primitive,
    sl2_trivial_model,
    string_k_invariant,
)

f, k, e = F_LETTER, K_LETTER, E_LETTER
one = poly_letter(0)


def test_sl2_brackets(model):
    br = model._sl2_bracket
    assert br(f, e) == {k: 2}
    assert br(k, e) == {e: 1}
    assert br(k, f) == {f: -1}


def test_semidirect_bracket(model):
    assert model.g_bracket(k, e) == {e: 1, form_letter(0): 1}
    assert model.g_bracket(f, e) == {k: 2}
    assert model.g_bracket(form_letter(1), form_letter(3)) == {}


def test_lie_derivative_examples():
    assert lie_derivative({0: 1}, {2: 1}, "function") == {1: 2}
    assert lie_derivative({1: 1}, {0: 1}, "form") == {0: 1}
    assert lie_derivative({2: 5}, {0: 1}, "function") == {}


def test_alpha_examples():
    assert alpha_cocycle({1: 1}, {2: 1}) == {0: 1}
    assert alpha_cocycle({0: 1}, {0: 1}) == {}
    # (1/2)(p' q'' - p'' q') with p = x^2, q = x^3 gives (1/2)(12 - 6) x^2
    assert alpha_cocycle({2: 1}, {3: 1}) == {2: 3}


def test_q_primitive_examples():
    assert q_primitive({0: 1}) == {1: 1}
    assert q_primitive({}) == {}
    assert q_primitive({2: 1}) == {3: Fraction(1, 3)}


def test_string_axioms_hold(model):
    assert not any(check_crossed_module(model, 4).values())


def test_kernel_of_partial_is_constants(model):
    assert model.partial(one) == {}
    for m in range(1, 6):
        assert model.partial(poly_letter(m)) == {form_letter(m - 1): m}
    for x in model.g_basis(3):
        assert model.action(x, one) == {}


def test_omega_values(model):
    assert model.omega(k, e) == {poly_letter(1): 1}
    assert model.omega(e, k) == {poly_letter(1): -1}
    assert model.omega(f, e) == {}


def test_alpha_is_a_cocycle(model):
    def alpha(x, y):
        return {(1, d): c for d, c in alpha_cocycle({x[1]: 1}, {y[1]: 1}).items()}

    def act(x, terms):
        out = {}
        for l, c in terms.items():
            for l2, c2 in lie_derivative({x[1]: 1}, {l[1]: 1}, "form").items():
                out[(1, l2)] = out.get((1, l2), 0) + c * c2
        return {a: b for a, b in out.items() if b}

    for x, y, z in permutations(SL2_LETTERS, 3):
        assert coboundary(alpha, act, model._sl2_bracket, x, y, z) == {}
    assert coboundary(lambda a, b: {}, act, model._sl2_bracket, f, k, e) == {}


def test_phi_from_six_term_formula(model):
    # only X > omega(Y,Z) terms survive: f > omega(k,e) = f > x = 1
    assert model.phi(f, k, e) == {one: 1}
    assert model.phi(f, f, e) == {}


def test_k_invariant_against_killing_form(model):
    kinv = string_k_invariant(model, f, k, e)
    killing = killing_form(model._sl2_bracket, SL2_LETTERS, f, e)
    assert kinv == {one: 1}
    assert killing == -4
    # the k-invariant is -1/4 <X,[Y,Z]> on every basis triple
    for x, y, z in permutations(SL2_LETTERS, 3):
        yz = model._sl2_bracket(y, z)
        pairing = sum(c * killing_form(model._sl2_bracket, SL2_LETTERS, x, l) for l, c in yz.items())
        assert string_k_invariant(model, x, y, z).get(one, 0) == Fraction(-1, 4) * pairing
    assert string_k_invariant(model, f, f, e) == {}


def test_phi_equals_godbillon_vey(model):
    for x, y, z in permutations(SL2_LETTERS, 3):
        gv = godbillon_vey({x[1]: 1}, {y[1]: 1}, {z[1]: 1})
        assert model.phi(x, y, z).get(one, 0) == gv


def test_trivial_model_is_sl2():
    m = sl2_trivial_model()
    assert m.h_basis() == []
    assert not any(check_crossed_module(m).values())


def _doc(**over):
    doc = {
        "version": 1,
        "g_basis": ["a", "b"],
        "h_basis": ["u"],
        "g_bracket": [["a", "b", "b", 1], ["b", "a", "b", -1]],
        "action": [["a", "u", "u", 1]],
        "partial": [["u", "b", 1]],
    }
    doc.update(over)
    return doc


def test_parse_model_round_trip(tmp_path):
    m, section = parse_model(_doc())
    assert m.g_names == ["a", "b"] and section == {}
    assert not any(check_crossed_module(m).values())
    p = tmp_path / "m.json"
    p.write_text(json.dumps(_doc()))
    assert load_model(p)[0].h_names == ["u"]


@pytest.mark.parametrize("bad", [
    {"version": 2},
    {"g_basis": "ab"},
    {"g_basis": ["a", "a"]},
    {"g_bracket": [["a", "b", "b", 1]]},
    {"g_bracket": [["a", "z", "b", 1]]},
    {"partial": [["u", "b"]]},
    {"action": [["a", "u", "u", "x/y"]]},
])
def test_parse_model_errors(bad):
    with pytest.raises(ModelError):
        parse_model(_doc(**bad))


def test_load_model_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ModelError):
        load_model(p)


def test_bad_crossed_module_is_reported():
    m, _ = parse_model(_doc(partial=[["u", "a", 1]]))
    fails = check_crossed_module(m)
    assert fails["equivariance"] or fails["peiffer"]
