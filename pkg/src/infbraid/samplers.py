"""Seeded random elements and valid morphisms for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence

from .algebra_core import DecoratedPermutation
from .crossed_modules import Letter
from .enveloping import Tensor
from .relative_tensor import UnElement, UnSpace
from .two_category import (
    OneMorphism,
    TwoMorphism,
    braiding,
    compose_one,
    identity,
    object_tensor,
)

COEFFS = (-3, -2, -1, 1, 2, 3)


def random_coeff(rng: random.Random) -> Fraction:
    c = Fraction(rng.choice(COEFFS))
    if rng.random() < 0.2:
        c /= rng.choice((2, 3))
    return c


def random_word(rng: random.Random, letters: Sequence[Letter], max_len: int) -> tuple:
    return tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))


def random_permutation(rng: random.Random, n: int) -> tuple:
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def random_tensor(space: UnSpace, n: int, rng: random.Random, terms: int = 3, word_len: int = 2,
                  degree_bound: int = 2) -> Tensor:
    letters = space.model.g_basis(degree_bound)
    monos = {}
    for _ in range(terms):
        mono = tuple(random_word(rng, letters, word_len) for _ in range(n))
        monos[mono] = monos.get(mono, 0) + random_coeff(rng)
    return Tensor(space.engine, n, monos)


def random_an_tensor(space: UnSpace, n: int, rng: random.Random, terms: int = 3, word_len: int = 2,
                     degree_bound: int = 2) -> Tensor:
    """Random element of ``A_n``: every monomial carries exactly one h-letter."""
    g = space.model.g_basis(degree_bound)
    h = space.model.h_basis(degree_bound)
    monos = {}
    for _ in range(terms):
        words = [list(random_word(rng, g, word_len)) for _ in range(n)]
        slot = rng.randrange(n)
        words[slot].insert(rng.randint(0, len(words[slot])), rng.choice(h))
        mono = tuple(tuple(w) for w in words)
        monos[mono] = monos.get(mono, 0) + random_coeff(rng)
    return Tensor(space.engine, n, monos)


def random_un(space: UnSpace, n: int, rng: random.Random, **kw) -> UnElement:
    return space.element(random_an_tensor(space, n, rng, **kw))


def random_generator(space: UnSpace, n: int, rng: random.Random, braiding2=None) -> OneMorphism:
    """One of: decorated permutation, block braiding, ``r^ab`` insertion."""
    choices = ["perm", "block"]
    if braiding2 is not None and n >= 2:
        choices.append("r")
    kind = rng.choice(choices)
    if kind == "perm":
        return identity(space, n, DecoratedPermutation(random_permutation(rng, n), rng.randint(0, 2)))
    if kind == "block":
        a = rng.randint(0, n)
        return braiding(space, a, n - a)
    a, b = sorted(rng.sample(range(1, n + 1), 2))
    return braiding2.r_at(n, a, b)


def random_one_morphism(space: UnSpace, n: int, rng: random.Random, braiding2=None, depth: int = 2) -> OneMorphism:
    """A valid 1-morphism built from generators by closure operations."""
    if depth <= 0:
        return random_generator(space, n, rng, braiding2)
    op = rng.choice(["gen", "compose", "scale", "shift", "sum", "tensor"])
    if op == "gen":
        return random_generator(space, n, rng, braiding2)
    if op == "compose":
        return compose_one(random_one_morphism(space, n, rng, braiding2, depth - 1),
                           random_one_morphism(space, n, rng, braiding2, depth - 1))
    if op == "scale":
        return random_one_morphism(space, n, rng, braiding2, depth - 1).scale(random_coeff(rng))
    if op == "shift":
        f = random_one_morphism(space, n, rng, braiding2, depth - 1)
        return TwoMorphism(f, random_un(space, n, rng, terms=2)).target()
    if op == "sum":
        f = random_one_morphism(space, n, rng, braiding2, depth - 1)
        g = TwoMorphism(f, random_un(space, n, rng, terms=2)).target()
        return f + g.scale(random_coeff(rng))
    if n < 2:
        return random_generator(space, n, rng, braiding2)
    a = rng.randint(1, n - 1)
    f = random_one_morphism(space, a, rng, braiding2, depth - 1)
    return object_tensor(space, f, right=n - a) if rng.random() < 0.5 else object_tensor(space, f, left=n - a)


def random_two_morphism(space: UnSpace, n: int, rng: random.Random, braiding2=None,
                        source: Optional[OneMorphism] = None) -> TwoMorphism:
    src = source if source is not None else random_one_morphism(space, n, rng, braiding2, depth=1)
    return TwoMorphism(src, random_un(space, n, rng, terms=2))


def samples(seed: int, count: int) -> List[random.Random]:
    """Independent generators, one per sample, derived from ``seed``."""
    base = random.Random(seed)
    return [random.Random(base.getrandbits(64)) for _ in range(count)]
