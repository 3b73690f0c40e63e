"""The strict monoidal linear 2-category built from a differential crossed module.

Objects are arities ``n``.  A 1-morphism ``n -> n`` is ``(R, zeta, sigma, k)``
with ``R`` in ``U(g)^n``, ``zeta: g -> U^(n)`` linear and ``(sigma, k)`` a
decorated permutation.  A 2-morphism out of ``f`` is an element ``T`` of
``U^(n)``; its target is ``(R + beta(T), zeta + (X -> X > T), sigma, k)``.
Composition is written left to right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra_core import ONE, DecoratedPermutation, Terms, add_into, block_transposition, perm_identity
from .crossed_modules import Letter
from .enveloping import Tensor, diagonal, g_act
from .relative_tensor import UnElement, UnSpace, h_act


class MorphismError(ValueError):
    """Composition of morphisms between different objects, or similar misuse."""


# ---------------------------------------------------------------------------
# linear maps g -> U^(n)


class LinearMap:
    """A linear map ``g -> U^(n)`` given by its values on letters.

    Values are computed on demand from ``rule`` and cached.  Combinators build
    new rule-form maps, which is how composite 1-morphisms carry their
    ``zeta`` without ever enumerating an infinite basis.
    """

    __slots__ = ("space", "arity", "_rule", "_cache", "label")

    def __init__(self, space: UnSpace, arity: int, rule: Callable[[Letter], UnElement], label: str = ""):
        self.space = space
        self.arity = arity
        self._rule = rule
        self._cache: Dict[Letter, UnElement] = {}
        self.label = label

    def __call__(self, letter: Letter) -> UnElement:
        hit = self._cache.get(letter)
        if hit is None:
            hit = self._rule(letter)
            if hit.arity != self.arity:
                raise MorphismError(f"zeta value of arity {hit.arity}, expected {self.arity}")
            self._cache[letter] = hit
        return hit

    def apply(self, terms: Mapping[Letter, Fraction]) -> UnElement:
        out = self.space.zero(self.arity)
        for l, c in terms.items():
            out = out + self(l).scale(c)
        return out

    # constructors ------------------------------------------------------------------
    @classmethod
    def zero(cls, space: UnSpace, arity: int) -> "LinearMap":
        z = space.zero(arity)
        return cls(space, arity, lambda _l: z, "0")

    @classmethod
    def table(cls, space: UnSpace, arity: int, values: Mapping[Letter, UnElement]) -> "LinearMap":
        z = space.zero(arity)
        vals = dict(values)
        return cls(space, arity, lambda l: vals.get(l, z), "table")

    # combinators ---------------------------------------------------------------------
    def __add__(self, other: "LinearMap") -> "LinearMap":
        if other.arity != self.arity:
            raise MorphismError("adding linear maps of different arity")
        return LinearMap(self.space, self.arity, lambda l: self(l) + other(l))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        if other.arity != self.arity:
            raise MorphismError("subtracting linear maps of different arity")
        return LinearMap(self.space, self.arity, lambda l: self(l) - other(l))

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.space, self.arity, lambda l: -self(l))

    def scale(self, c: Any) -> "LinearMap":
        return LinearMap(self.space, self.arity, lambda l: self(l).scale(c))

    def lmul(self, t: Tensor) -> "LinearMap":
        """``X -> t * zeta(X)``."""
        return LinearMap(self.space, self.arity, lambda l: t * self(l))

    def rmul(self, t: Tensor) -> "LinearMap":
        """``X -> zeta(X) * t``."""
        return LinearMap(self.space, self.arity, lambda l: self(l) * t)

    def permute(self, p) -> "LinearMap":
        return LinearMap(self.space, self.arity, lambda l: self(l).permute(p))

    def tensor_right(self, t: Tensor) -> "LinearMap":
        """``X -> zeta(X) (x) t``."""
        return LinearMap(self.space, self.arity + t.arity, lambda l: self(l).tensor_right(t))

    def tensor_left(self, t: Tensor) -> "LinearMap":
        """``X -> t (x) zeta(X)``."""
        return LinearMap(self.space, self.arity + t.arity, lambda l: self(l).tensor_left(t))

    def insert(self, positions: Sequence[int], n: int) -> "LinearMap":
        pos = tuple(positions)
        return LinearMap(self.space, n, lambda l: self(l).insert(pos, n))


# ---------------------------------------------------------------------------
# 1- and 2-morphisms


@dataclass(frozen=True)
class OneMorphism:
    n: int
    R: Tensor
    zeta: LinearMap
    tau: DecoratedPermutation
    space: UnSpace = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.R.arity != self.n or self.zeta.arity != self.n or self.tau.n != self.n:
            raise MorphismError("arity mismatch inside a 1-morphism")

    @property
    def sigma(self):
        return self.tau.sigma

    @property
    def k(self) -> int:
        return self.tau.k

    def __mul__(self, other: "OneMorphism") -> "OneMorphism":
        return compose_one(self, other)

    def scale(self, c: Any) -> "OneMorphism":
        return OneMorphism(self.n, self.R.scale(c), self.zeta.scale(c), self.tau, self.space)

    def __add__(self, other: "OneMorphism") -> "OneMorphism":
        if other.n != self.n or other.tau != self.tau:
            raise MorphismError("only 1-morphisms with the same decorated permutation can be added")
        return OneMorphism(self.n, self.R + other.R, self.zeta + other.zeta, self.tau, self.space)

    def __sub__(self, other: "OneMorphism") -> "OneMorphism":
        return self + other.scale(-1)


def identity(space: UnSpace, n: int, tau: DecoratedPermutation | None = None) -> OneMorphism:
    eng = space.engine
    return OneMorphism(n, Tensor.one(eng, n), LinearMap.zero(space, n), tau or DecoratedPermutation.identity(n), space)


def permutation_morphism(space: UnSpace, sigma: Sequence[int], k: int = 0) -> OneMorphism:
    return identity(space, len(sigma), DecoratedPermutation(tuple(sigma), k))


def braiding(space: UnSpace, n: int, m: int) -> OneMorphism:
    """``B_{n,m} = (1, 0, (sigma_{n,m}, 0))``."""
    return identity(space, n + m, block_transposition(n, m))


def compose_one(a: OneMorphism, b: OneMorphism) -> OneMorphism:
    """``(R, z, s, k)(R', z', s', k') = (R s(R'), R s(z') + z s(R'), ss', k+k')``."""
    if a.n != b.n:
        raise MorphismError(f"cannot compose 1-morphisms on objects {a.n} and {b.n}")
    sigma = a.sigma
    moved_R = b.R.permute(sigma)
    zeta = b.zeta.permute(sigma).lmul(a.R) + a.zeta.rmul(moved_R)
    return OneMorphism(a.n, a.R * moved_R, zeta, a.tau * b.tau, a.space)


def tensor_one(a: OneMorphism, b: OneMorphism) -> OneMorphism:
    """``(R (x) R', R (x) z' + z (x) R', tau (x) tau')``."""
    zeta = b.zeta.tensor_left(a.R) + a.zeta.tensor_right(b.R)
    return OneMorphism(a.n + b.n, a.R.tensor(b.R), zeta, a.tau.tensor(b.tau), a.space)


def object_tensor(space: UnSpace, m: OneMorphism, left: int = 0, right: int = 0) -> OneMorphism:
    """``left (x) m (x) right`` with identity 1-morphisms on the padding objects."""
    out = m
    if left:
        out = tensor_one(identity(space, left), out)
    if right:
        out = tensor_one(out, identity(space, right))
    return out


@dataclass(frozen=True)
class TwoMorphism:
    source: OneMorphism
    T: UnElement

    def __post_init__(self) -> None:
        if self.T.arity != self.source.n:
            raise MorphismError("2-morphism element has the wrong arity")

    @property
    def n(self) -> int:
        return self.source.n

    def target(self) -> OneMorphism:
        s = self.source
        T = self.T
        shift = LinearMap(s.space, s.n, lambda l: T.g_act({l: ONE}))
        return OneMorphism(s.n, s.R + T.beta(), s.zeta + shift, s.tau, s.space)

    def inverse(self) -> "TwoMorphism":
        return TwoMorphism(self.target(), -self.T)


def vertical(t1: TwoMorphism, t2: TwoMorphism) -> TwoMorphism:
    """``t1`` followed by ``t2`` (the caller guarantees ``t2.source`` is ``t1``'s target)."""
    return TwoMorphism(t1.source, t1.T + t2.T)


def whisker_left(m: OneMorphism, t: TwoMorphism) -> TwoMorphism:
    """``m t``: element ``R_m sigma_m(T)``."""
    if m.n != t.n:
        raise MorphismError("whiskering across different objects")
    return TwoMorphism(compose_one(m, t.source), m.R * t.T.permute(m.sigma))


def whisker_right(t: TwoMorphism, m: OneMorphism) -> TwoMorphism:
    """``t m``: element ``T sigma_t(R_m)``."""
    if m.n != t.n:
        raise MorphismError("whiskering across different objects")
    return TwoMorphism(compose_one(t.source, m), t.T * m.R.permute(t.source.sigma))


def whisker(side: str, m: OneMorphism, t: TwoMorphism) -> TwoMorphism:
    if side == "left":
        return whisker_left(m, t)
    if side == "right":
        return whisker_right(t, m)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def horizontal(t: TwoMorphism, s: TwoMorphism, order: str = "first") -> TwoMorphism:
    """Horizontal composite of ``t: f => f'`` and ``s: h => h'``.

    ``order='first'`` evaluates ``(t h) ; (f' s)``, ``order='second'``
    evaluates ``(f s) ; (t h')``; the interchange law says they agree.
    """
    f, h = t.source, s.source
    if order == "first":
        a = whisker_right(t, h)
        b = whisker_left(t.target(), s)
    elif order == "second":
        a = whisker_left(f, s)
        b = whisker_right(t, s.target())
    else:
        raise ValueError(order)
    return TwoMorphism(compose_one(f, h), a.T + b.T)


def tensor_two(t: TwoMorphism, s: TwoMorphism, order: str = "first") -> TwoMorphism:
    """``t (x) s``: ``T (x) R_s + (R_t + beta T) (x) S`` or ``R_t (x) S + T (x) (R_s + beta S)``."""
    f, g = t.source, s.source
    if order == "first":
        el = t.T.tensor_right(g.R) + s.T.tensor_left(f.R + t.T.beta())
    elif order == "second":
        el = s.T.tensor_left(f.R) + t.T.tensor_right(g.R + s.T.beta())
    else:
        raise ValueError(order)
    return TwoMorphism(tensor_one(f, g), el)


def tensor_morphisms(a, b):
    if isinstance(a, OneMorphism) and isinstance(b, OneMorphism):
        return tensor_one(a, b)
    if isinstance(a, TwoMorphism) and isinstance(b, TwoMorphism):
        return tensor_two(a, b)
    if isinstance(a, TwoMorphism) and isinstance(b, OneMorphism):
        return tensor_two(a, TwoMorphism(b, b.space.zero(b.n)))
    if isinstance(a, OneMorphism) and isinstance(b, TwoMorphism):
        return tensor_two(TwoMorphism(a, a.space.zero(a.n)), b)
    raise TypeError("tensor_morphisms expects 1- or 2-morphisms")


# ---------------------------------------------------------------------------
# validity and equality


def validate_one(m: OneMorphism, degree_bound: int, mode: str = "rewrite") -> Dict[str, List[str]]:
    """Witnesses violating conditions (i)-(iii) on enumerated letters."""
    space = m.space
    model = space.model
    name = model.letter_name
    g = model.g_basis(degree_bound)
    h = model.h_basis(degree_bound)
    bad: Dict[str, List[str]] = {"i": [], "ii": [], "iii": []}
    for x in g:
        lhs = g_act({x: ONE}, m.R)
        if lhs != m.zeta(x).beta():
            bad["i"].append(name(x))
    for u in h:
        lhs = h_act(space, {u: ONE}, m.R)
        if not space.equal(lhs, m.zeta.apply(model.partial(u)), mode):
            bad["ii"].append(name(u))
    for i, x in enumerate(g):
        for y in g[i + 1:]:
            lhs = m.zeta.apply(model.g_bracket(x, y))
            rhs = m.zeta(y).g_act({x: ONE}) - m.zeta(x).g_act({y: ONE})
            if not space.equal(lhs, rhs, mode):
                bad["iii"].append(f"[{name(x)},{name(y)}]")
    return bad


def is_valid(m: OneMorphism, degree_bound: int, mode: str = "rewrite") -> bool:
    return not any(validate_one(m, degree_bound, mode).values())


def zeta_letters(space: UnSpace, degree_bound: int) -> List[Letter]:
    return space.model.g_basis(degree_bound)


def one_morphism_defect(a: OneMorphism, b: OneMorphism, degree_bound: int, mode: str = "rewrite") -> List[str]:
    """Empty list iff ``a`` and ``b`` agree (``zeta`` compared on letters up to the bound)."""
    out: List[str] = []
    if a.n != b.n:
        return [f"objects {a.n} vs {b.n}"]
    if a.tau != b.tau:
        out.append(f"tau {a.tau!r} vs {b.tau!r}")
    diff = a.R - b.R
    if not diff.is_zero():
        out.append(f"R differs in {len(diff)} terms")
    name = a.space.model.letter_name
    for l in zeta_letters(a.space, degree_bound):
        if not a.space.equal(a.zeta(l), b.zeta(l), mode):
            out.append(f"zeta({name(l)})")
    return out


def one_morphisms_equal(a: OneMorphism, b: OneMorphism, degree_bound: int, mode: str = "rewrite") -> bool:
    return not one_morphism_defect(a, b, degree_bound, mode)


# ---------------------------------------------------------------------------
# the crossed module gl(n)


class GlZero:
    """Element of ``gl^0(n)``: a finite sum of 1-morphisms keyed by decoration."""

    def __init__(self, space: UnSpace, n: int, parts: Mapping[DecoratedPermutation, OneMorphism] | None = None):
        self.space = space
        self.n = n
        self.parts: Dict[DecoratedPermutation, OneMorphism] = dict(parts or {})

    @classmethod
    def of(cls, m: OneMorphism) -> "GlZero":
        return cls(m.space, m.n, {m.tau: m})

    def _merge(self, tau: DecoratedPermutation, m: OneMorphism, sign: int = 1) -> None:
        m = m if sign == 1 else m.scale(-1)
        if tau in self.parts:
            self.parts[tau] = self.parts[tau] + m
        else:
            self.parts[tau] = m

    def __add__(self, other: "GlZero") -> "GlZero":
        out = GlZero(self.space, self.n, self.parts)
        for tau, m in other.parts.items():
            out._merge(tau, m)
        return out

    def __sub__(self, other: "GlZero") -> "GlZero":
        out = GlZero(self.space, self.n, self.parts)
        for tau, m in other.parts.items():
            out._merge(tau, m, -1)
        return out

    def __mul__(self, other: "GlZero") -> "GlZero":
        out = GlZero(self.space, self.n)
        for m1 in self.parts.values():
            for m2 in other.parts.values():
                prod = compose_one(m1, m2)
                out._merge(prod.tau, prod)
        return out

    def bracket(self, other: "GlZero") -> "GlZero":
        return self * other - other * self

    def defect(self, other: "GlZero", degree_bound: int, mode: str = "rewrite") -> List[str]:
        out: List[str] = []
        for tau in sorted(set(self.parts) | set(other.parts)):
            a = self.parts.get(tau)
            b = other.parts.get(tau)
            zero = identity(self.space, self.n, tau).scale(0)
            out.extend(f"{tau!r}: {d}" for d in one_morphism_defect(a or zero, b or zero, degree_bound, mode))
        return out


class GlOne:
    """Element of ``gl^1(n)``: arrow parts of 2-morphisms out of zero, keyed by decoration."""

    def __init__(self, space: UnSpace, n: int, parts: Mapping[DecoratedPermutation, UnElement] | None = None):
        self.space = space
        self.n = n
        self.parts: Dict[DecoratedPermutation, UnElement] = dict(parts or {})

    def _merge(self, tau: DecoratedPermutation, T: UnElement) -> None:
        self.parts[tau] = self.parts[tau] + T if tau in self.parts else T

    def __add__(self, other: "GlOne") -> "GlOne":
        out = GlOne(self.space, self.n, self.parts)
        for tau, T in other.parts.items():
            out._merge(tau, T)
        return out

    def __sub__(self, other: "GlOne") -> "GlOne":
        out = GlOne(self.space, self.n, self.parts)
        for tau, T in other.parts.items():
            out._merge(tau, -T)
        return out

    def boundary(self) -> GlZero:
        parts = {}
        for tau, T in self.parts.items():
            parts[tau] = TwoMorphism(identity(self.space, self.n, tau).scale(0), T).target()
        return GlZero(self.space, self.n, parts)

    def bracket(self, other: "GlOne") -> "GlOne":
        """``{T, S} = TS - ST`` with ``TS = beta(T) sigma_T(S)``."""
        out = GlOne(self.space, self.n)
        for t1, T in self.parts.items():
            for t2, S in other.parts.items():
                out._merge(t1 * t2, T.beta() * S.permute(t1.sigma))
                out._merge(t2 * t1, -(S.beta() * T.permute(t2.sigma)))
        return out

    def defect(self, other: "GlOne", mode: str = "rewrite") -> List[str]:
        out = []
        for tau in sorted(set(self.parts) | set(other.parts)):
            a = self.parts.get(tau, self.space.zero(self.n))
            b = other.parts.get(tau, self.space.zero(self.n))
            if not self.space.equal(a, b, mode):
                out.append(repr(tau))
        return out


def gl_act(f: GlZero, T: GlOne) -> GlOne:
    """``f > T = fT - Tf`` (left minus right whiskering)."""
    out = GlOne(T.space, T.n)
    for t1, m in f.parts.items():
        for t2, S in T.parts.items():
            out._merge(t1 * t2, m.R * S.permute(t1.sigma))
            out._merge(t2 * t1, -(S * m.R.permute(t2.sigma)))
    return out


@dataclass(frozen=True)
class GlStructure:
    """The differential crossed module ``gl(n)`` with its four structure maps."""

    space: UnSpace
    n: int

    def bracket0(self, f: GlZero, g: GlZero) -> GlZero:
        return f.bracket(g)

    def bracket1(self, T: GlOne, S: GlOne) -> GlOne:
        return T.bracket(S)

    def action(self, f: GlZero, T: GlOne) -> GlOne:
        return gl_act(f, T)

    def boundary(self, T: GlOne) -> GlZero:
        return T.boundary()


def gl_structure(space: UnSpace, n: int) -> GlStructure:
    return GlStructure(space, n)
