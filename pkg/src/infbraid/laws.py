"""Structural laws of the 2-category and of ``gl(n)``, evaluated on samples."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .braiding2 import AxiomReport, Braiding2
from .relative_tensor import UnElement, UnSpace
from .samplers import random_one_morphism, random_permutation, random_two_morphism, random_un, samples
from .algebra_core import DecoratedPermutation
from .two_category import (
    GlOne,
    GlZero,
    braiding,
    compose_one,
    gl_act,
    horizontal,
    identity,
    is_valid,
    object_tensor,
    one_morphism_defect,
    tensor_one,
    tensor_two,
    vertical,
    whisker_left,
    whisker_right,
)

LAWS = (
    "interchange", "cwis", "assoc", "whisker_assoc", "whisker_distrib", "whisker_target",
    "tensor_interchange", "tensor_target", "tensor_unit", "braid_involutive", "braideq",
    "braid_unit", "Bfunct1", "Bfunct2", "validity_closure",
)
GL_LAWS = ("peiffer", "equivariance", "zero_action")


def _el_count(a: UnElement, b: UnElement, mode: str = "rewrite") -> int:
    if a.space.equal(a, b, mode):
        return 0
    return max(1, len(a.space.canonical((a - b).tensor)))


def _two(space, n, rng, b, source=None):
    return random_two_morphism(space, n, rng, b, source)


def _one(space, n, rng, b):
    return random_one_morphism(space, n, rng, b, depth=1)


def check_laws(
    space: UnSpace,
    braiding2: Optional[Braiding2] = None,
    seed: int = 0,
    count: int = 25,
    degree_bound: int = 2,
    max_arity: int = 3,
    laws: Sequence[str] = LAWS,
    mode: str = "rewrite",
) -> AxiomReport:
    """Each law on structural generators plus ``count`` seeded samples."""
    rep = AxiomReport()
    D = degree_bound
    b = braiding2

    def one_def(x, y) -> int:
        return len(one_morphism_defect(x, y, D, mode))

    def case_interchange(rng, n, tag):
        t = _two(space, n, rng, b)
        s = _two(space, n, rng, b)
        rep.add("interchange", tag, _el_count(horizontal(t, s, "first").T, horizontal(t, s, "second").T, mode))

    def case_cwis(rng, n, tag):
        t, s, h = _two(space, n, rng, b), _two(space, n, rng, b), _one(space, n, rng, b)
        lhs = horizontal(whisker_right(t, h), s, "first")
        rhs = horizontal(t, whisker_left(h, s), "first")
        rep.add("cwis", tag, _el_count(lhs.T, rhs.T, mode))

    def case_assoc(rng, n, tag):
        f, g, h = (_one(space, n, rng, b) for _ in range(3))
        rep.add("assoc", tag, one_def(compose_one(compose_one(f, g), h), compose_one(f, compose_one(g, h))))

    def case_whisker(rng, n, tag):
        f, g = _one(space, n, rng, b), _one(space, n, rng, b)
        t = _two(space, n, rng, b)
        c = _el_count(whisker_left(f, whisker_right(t, g)).T, whisker_right(whisker_left(f, t), g).T, mode)
        c += _el_count(whisker_right(t, compose_one(f, g)).T, whisker_right(whisker_right(t, f), g).T, mode)
        c += _el_count(whisker_left(compose_one(f, g), t).T, whisker_left(f, whisker_left(g, t)).T, mode)
        rep.add("whisker_assoc", tag, c)
        s = _two(space, n, rng, b, source=t.target())
        ts = vertical(t, s)
        c = _el_count(whisker_right(ts, f).T, vertical(whisker_right(t, f), whisker_right(s, f)).T, mode)
        c += _el_count(whisker_left(f, ts).T, vertical(whisker_left(f, t), whisker_left(f, s)).T, mode)
        rep.add("whisker_distrib", tag, c)
        c = one_def(whisker_left(f, t).target(), compose_one(f, t.target()))
        c += one_def(whisker_right(t, f).target(), compose_one(t.target(), f))
        rep.add("whisker_target", tag, c)

    def case_tensor(rng, n, m, tag):
        t, s = _two(space, n, rng, b), _two(space, m, rng, b)
        first, second = tensor_two(t, s, "first"), tensor_two(t, s, "second")
        rep.add("tensor_interchange", tag, _el_count(first.T, second.T, mode))
        rep.add("tensor_target", tag, one_def(first.target(), tensor_one(t.target(), s.target())))
        f = t.source
        c = one_def(tensor_one(f, identity(space, 0)), f) + one_def(tensor_one(identity(space, 0), f), f)
        rep.add("tensor_unit", tag, c)
        # Bfunct1 / Bfunct2 with the braiding between the two objects
        g = s.source
        lhs = compose_one(tensor_one(f, g), braiding(space, n, m))
        rhs = compose_one(braiding(space, n, m), tensor_one(g, f))
        rep.add("Bfunct1", tag, one_def(lhs, rhs))
        lhs2 = whisker_right(tensor_two(t, s), braiding(space, n, m))
        rhs2 = whisker_left(braiding(space, n, m), tensor_two(s, t))
        rep.add("Bfunct2", tag, _el_count(lhs2.T, rhs2.T, mode))
        closure = [compose_one(lhs, identity(space, n + m)), first.target(), lhs2.target(), whisker_left(
            braiding(space, n, m), first).target()]
        rep.add("validity_closure", tag, sum(0 if is_valid(x, D, mode) else 1 for x in closure))

    # braiding identities on small objects
    if "braid_involutive" in laws or "braideq" in laws or "braid_unit" in laws:
        for x in range(0, max_arity + 1):
            for y in range(0, max_arity + 1 - x):
                rep.add("braid_involutive", f"B_{x},{y}", one_def(
                    compose_one(braiding(space, x, y), braiding(space, y, x)), identity(space, x + y)))
                for z in range(0, max_arity + 1 - x - y):
                    lhs = braiding(space, x, y + z)
                    rhs = compose_one(object_tensor(space, braiding(space, x, y), right=z),
                                      object_tensor(space, braiding(space, x, z), left=y))
                    rep.add("braideq", f"B_{x},{y}{z}", one_def(lhs, rhs))
                    lhs = braiding(space, x + y, z)
                    rhs = compose_one(object_tensor(space, braiding(space, y, z), left=x),
                                      object_tensor(space, braiding(space, x, z), right=y))
                    rep.add("braideq", f"B_{x}{y},{z}", one_def(lhs, rhs))
            rep.add("braid_unit", f"B_{x},0", one_def(braiding(space, x, 0), identity(space, x))
                    + one_def(braiding(space, 0, x), identity(space, x)))

    for i, rng in enumerate(samples(seed, count)):
        n = rng.randint(1, max_arity)
        tag = f"sample{i}(n={n})"
        if "interchange" in laws:
            case_interchange(rng, n, tag)
        if "cwis" in laws:
            case_cwis(rng, n, tag)
        if "assoc" in laws:
            case_assoc(rng, n, tag)
        if {"whisker_assoc", "whisker_distrib", "whisker_target"} & set(laws):
            case_whisker(rng, n, tag)
        if max_arity >= 2 and {"tensor_interchange", "tensor_target", "Bfunct1", "Bfunct2"} & set(laws):
            a = rng.randint(1, max_arity - 1)
            m = rng.randint(1, max_arity - a)
            case_tensor(rng, a, m, f"sample{i}(n={a},m={m})")
    return rep


def random_gl_one(space: UnSpace, n: int, rng: random.Random, parts: int = 2) -> GlOne:
    out = GlOne(space, n)
    for _ in range(parts):
        tau = DecoratedPermutation(random_permutation(rng, n), rng.randint(0, 1))
        out._merge(tau, random_un(space, n, rng, terms=2))
    return out


def random_gl_zero(space: UnSpace, n: int, rng: random.Random, braiding2=None, parts: int = 2) -> GlZero:
    out = GlZero(space, n)
    for _ in range(parts):
        m = random_one_morphism(space, n, rng, braiding2, depth=1)
        out._merge(m.tau, m)
    return out


def check_gl(
    space: UnSpace,
    braiding2: Optional[Braiding2] = None,
    seed: int = 0,
    count: int = 25,
    degree_bound: int = 2,
    max_arity: int = 3,
    mode: str = "rewrite",
) -> AxiomReport:
    """``beta(T) > S = {T, S}``, ``beta(f > T) = f > beta(T)`` and ``0 > T = 0``."""
    rep = AxiomReport()
    for i, rng in enumerate(samples(seed + 1, count)):
        n = rng.randint(1, max_arity)
        tag = f"sample{i}(n={n})"
        T, S = random_gl_one(space, n, rng), random_gl_one(space, n, rng)
        f = random_gl_zero(space, n, rng, braiding2)
        rep.add("peiffer", tag, len(gl_act(T.boundary(), S).defect(T.bracket(S), mode)))
        rep.add("equivariance", tag, len(gl_act(f, T).boundary().defect(f.bracket(T.boundary()), degree_bound, mode)))
        zero = gl_act(GlZero(space, n), T)
        rep.add("zero_action", tag, len(zero.defect(GlOne(space, n), mode)))
    return rep
