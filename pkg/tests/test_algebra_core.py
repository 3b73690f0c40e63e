from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infbraid.algebra_core import (
    DecoratedPermutation,
    LinComb,
    as_scalar,
    block_transposition,
    decorated_compose,
    lincomb_combine,
    perm_cycles,
    perm_from_cycles,
    perm_identity,
    perm_inverse,
    perm_product,
)

perms = st.integers(1, 6).flatmap(lambda n: st.permutations(list(range(n))).map(tuple))
keys = st.sampled_from(["a", "b", "c", "d"])
rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)
combs = st.dictionaries(keys, rats, max_size=4).map(LinComb)


def test_lincomb_examples():
    x = LinComb({"m": 3, "n": Fraction(1, 2)})
    assert lincomb_combine(x, x, 1, -1).is_zero()
    assert lincomb_combine(LinComb({"m": 2}), LinComb({"m": 3}), 1, 1) == LinComb({"m": 5})
    assert lincomb_combine(LinComb({"m": Fraction(1, 2)}), LinComb(), 2, 7) == LinComb({"m": 1})


def test_no_zero_coefficients_stored():
    assert LinComb({"m": 0, "n": 1}).support() == ["n"]
    assert (LinComb({"m": 1}) - LinComb({"m": 1})).support() == []


def test_scalars_are_exact():
    assert as_scalar("2/4") == Fraction(1, 2)
    assert as_scalar(3) == Fraction(3)
    with pytest.raises((TypeError, ValueError)):
        as_scalar(0.1)


@given(combs, combs, combs, rats)
def test_lincomb_module_axioms(a, b, c, s):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert (a + b) * s == a * s + b * s
    assert (a - a).is_zero()


def test_decorated_compose_examples():
    e = DecoratedPermutation.identity(3)
    assert decorated_compose(e, e) == e
    s = DecoratedPermutation(perm_from_cycles(3, (1, 2, 3)), 1)
    assert s * DecoratedPermutation(perm_inverse(s.sigma), -1) == e
    # (12) then (23), read left to right: 1 -> 2 -> 3, 2 -> 1, 3 -> 2
    t = DecoratedPermutation(perm_from_cycles(3, (1, 2)), 2) * DecoratedPermutation(perm_from_cycles(3, (2, 3)), 3)
    assert t == DecoratedPermutation((2, 0, 1), 5)
    with pytest.raises(ValueError):
        decorated_compose(e, DecoratedPermutation.identity(2))


def test_block_transposition_examples():
    assert block_transposition(1, 1).sigma == (1, 0)
    assert block_transposition(3, 0).is_identity()
    assert block_transposition(2, 1).sigma == (1, 2, 0)
    assert perm_cycles(block_transposition(2, 1).sigma) == "(1 2 3)"


@given(perms, perms, perms, st.integers(-3, 3), st.integers(-3, 3))
def test_decorated_product_is_associative(p, q, r, k1, k2):
    if not len(p) == len(q) == len(r):
        return
    a, b, c = DecoratedPermutation(p, k1), DecoratedPermutation(q, k2), DecoratedPermutation(r, 0)
    assert (a * b) * c == a * (b * c)
    assert a * DecoratedPermutation.identity(len(p)) == a
    assert a * a.inverse() == DecoratedPermutation.identity(len(p))


@given(perms)
def test_slot_action_is_compatible_with_product(p):
    n = len(p)
    q = tuple(reversed(range(n)))
    t = tuple("abcdef"[:n])

    def act(s, x):
        return tuple(x[s[j]] for j in range(n))

    assert act(perm_product(p, q), t) == act(p, act(q, t))
    assert perm_product(p, perm_inverse(p)) == perm_identity(n)
