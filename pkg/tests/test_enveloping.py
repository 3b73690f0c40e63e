import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infbraid.crossed_modules import E_LETTER, F_LETTER, K_LETTER, form_letter, poly_letter, sl2_trivial_model
from infbraid.enveloping import (
    ArityError,
    PBWEngine,
    Tensor,
    classical_four_term_defect,
    diagonal,
    g_act,
)

f, k, e = F_LETTER, K_LETTER, E_LETTER
x, dx = poly_letter, form_letter


def algebra_letters():
    return [f, k, e, dx(0), dx(1), dx(2), x(0), x(1), x(2)]


words = st.lists(st.sampled_from(algebra_letters()), max_size=5).map(tuple)


def test_sl2_normal_ordering(engine):
    # e f = f e + [e, f] and [e, f] = -2k
    assert engine.normal_word((e, f)) == {(f, e): 1, (k,): -2}
    # k e = e k + [k, e]: already in order
    assert engine.normal_word((k, e)) == {(k, e): 1}
    assert engine.normal_word((e, k)) == {(k, e): 1, (e,): -1, (dx(0),): -1}
    assert engine.normal_word(()) == {(): 1}


def test_h_letters_commute_past_g(engine):
    # [x, e] = -(e > x) = -x^2
    assert engine.normal_word((x(1), e)) == {(e, x(1)): 1, (x(2),): -1}
    assert engine.normal_word((x(1), x(2))) == {(x(1), x(2)): 1}


def test_tensor_arithmetic(engine):
    a = Tensor.elementary(engine, (e,), (f,))
    b = Tensor.elementary(engine, (f,), (e,))
    assert (a - a).is_zero()
    assert a.flip() == b
    assert a * Tensor.one(engine, 2) == a
    assert len(a + b) == 2
    with pytest.raises(ArityError):
        a + Tensor.one(engine, 3)


def test_diagonal(engine):
    d = diagonal(engine, {k: 1}, 2)
    assert d == Tensor.elementary(engine, (k,), ()) + Tensor.elementary(engine, (), (k,))
    assert diagonal(engine, {k: 2}, 1) == Tensor.elementary(engine, (k,), coeff=2)


def test_adjoint_action(engine):
    r = Tensor.elementary(engine, (e,), (f,))
    # k > (e (x) f) = [k,e] (x) f + e (x) [k,f] = (e + dx) (x) f - e (x) f
    assert g_act({k: 1}, r) == Tensor.elementary(engine, (dx(0),), (f,))
    sl2 = PBWEngine(sl2_trivial_model())
    r0 = Tensor.elementary(sl2, (e,), (f,))
    assert g_act({k: 1}, r0).is_zero()


def test_insertion(engine):
    r = Tensor.elementary(engine, (e,), (f,))
    assert r.insert((0, 2), 3) == Tensor.elementary(engine, (e,), (), (f,))
    assert r.insert((2, 0), 3) == Tensor.elementary(engine, (f,), (), (e,))
    assert r.insert((1, 2), 3).tensor(Tensor.one(engine, 1)) == Tensor.elementary(engine, (), (e,), (f,), ())


def test_classical_four_term_on_e_tensor_f():
    sl2 = PBWEngine(sl2_trivial_model())
    r = Tensor.elementary(sl2, (e,), (f,))
    # [r12, r23] = e (x) [f, e] (x) f = 2 e (x) k (x) f and [r13, r23] = e (x) e (x) [f, f] = 0
    assert classical_four_term_defect(r) == Tensor.elementary(sl2, (e,), (k,), (f,), coeff=2)
    with pytest.raises(ArityError):
        classical_four_term_defect(Tensor.one(sl2, 3))


@given(words, st.integers(0, 2**32))
def test_rewrite_order_is_confluent(engine, word, seed):
    expected = engine.normal_word(word)
    assert engine.normal_word_with(word, "rightmost") == expected
    assert engine.normal_word_with(word, random.Random(seed)) == expected


@given(words, words, words)
def test_product_is_associative(engine, a, b, c):
    A, B, C = (Tensor(engine, 1, {(w,): Fraction(1)}) for w in (a, b, c))
    assert (A * B) * C == A * (B * C)


@given(words, words)
def test_normal_forms_are_sorted(engine, a, b):
    t = Tensor(engine, 2, {(a, b): 1})
    for mono in t.terms:
        for w in mono:
            assert list(w) == sorted(w)
