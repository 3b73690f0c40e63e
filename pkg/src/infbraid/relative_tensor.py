"""The single-h-letter spaces ``A_n`` and their quotients ``U^(n)``.

``A_n`` is spanned by PBW monomials over ``e = h x| g`` carrying exactly one
letter from ``h``.  ``U^(n)`` is ``A_n`` modulo ``x d(u) y v z = x u y d(v) z``.

Two equality routes are provided and kept independent:

* *rewrite*: a canonical representative per class.  For the String model
  the ideal ``F1 (+) F0`` of ``e`` is abelian, so a class is determined by
  its sl2 words together with the image under ``beta`` of its abelian tail
  (when that tail contains a 1-form) or by the monomial itself (when it
  does not).  The representative carries the h-letter on the smallest
  (slot, degree) abelian letter.
* *span*: the support of ``a - b`` is closed under raw relation instances
  and membership of ``a - b`` in their span is decided by an exact rank
  computation.

For finite-dimensional models the quotient is computed by linear algebra
on relation instances up to a filtration bound.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .algebra_core import ONE, ZERO, Perm, Terms, add_into, add_term, as_scalar
from .crossed_modules import H_KIND, CrossedModuleModel, FiniteCrossedModule, Letter, StringModel
from .enveloping import ArityError, Mono, PBWEngine, Tensor, Word, diagonal

DEFAULT_SUPPORT_CAP = 20_000
MODES = ("rewrite", "span", "both")


class NotInAn(ValueError):
    """A monomial without exactly one h-letter was offered as an A_n element."""


class SpanCapExceeded(RuntimeError):
    """The span-oracle closure outgrew its configured support cap."""


class OracleDisagreement(AssertionError):
    """The rewrite and span routes disagreed (``mode='both'``)."""


def h_position(mono: Mono) -> Tuple[int, int]:
    """(slot, index) of the unique h-letter, or raise :class:`NotInAn`."""
    found = None
    for s, word in enumerate(mono):
        for i, l in enumerate(word):
            if l[0] == H_KIND:
                if found is not None:
                    raise NotInAn(f"monomial {mono!r} has more than one h-letter")
                found = (s, i)
    if found is None:
        raise NotInAn(f"monomial {mono!r} has no h-letter")
    return found


def _rank(rows: List[Mapping[int, Fraction]], ncols: int) -> int:
    if not rows:
        return 0
    data = {i: {j: QQ(c.numerator, c.denominator) for j, c in row.items()} for i, row in enumerate(rows) if row}
    if not data:
        return 0
    data = {i: row for i, row in enumerate(data.values())}
    return DomainMatrix(data, (len(data), ncols), QQ).rank()


class UnSpace:
    """Quotient machinery for one crossed-module model (all arities)."""

    # True when canonical() is linear and idempotent, so sums of canonical
    # representatives are canonical again.
    exact_normal_form = True

    def __init__(self, model: CrossedModuleModel, engine: PBWEngine | None = None, support_cap: int = DEFAULT_SUPPORT_CAP):
        self.model = model
        self.engine = engine or PBWEngine(model)
        if self.engine.model is not model:
            raise ValueError("engine belongs to a different model")
        self.support_cap = support_cap

    # to be provided by subclasses ---------------------------------------------
    def canonical(self, t: Tensor) -> Tensor:
        raise NotImplementedError

    def in_relations(self, t: Tensor) -> bool:
        raise NotImplementedError

    # shared ---------------------------------------------------------------------
    def check_an(self, t: Tensor) -> None:
        for mono in t.terms:
            h_position(mono)

    def element(self, t: Tensor) -> "UnElement":
        if t.engine is not self.engine:
            raise ValueError("tensor over a foreign engine")
        self.check_an(t)
        return UnElement(self, t.arity, self.canonical(t))

    def zero(self, n: int) -> "UnElement":
        return UnElement(self, n, Tensor.zero(self.engine, n))

    def from_monos(self, n: int, terms: Mapping[Mono, Any]) -> "UnElement":
        return self.element(Tensor(self.engine, n, dict(terms)))

    def beta_tensor(self, t: Tensor) -> Tensor:
        """Replace the h-letter ``v`` of every monomial by ``d(v)``."""
        partial = self.model.partial
        out: Terms = {}
        for mono, c in t.terms.items():
            s, i = h_position(mono)
            word = mono[s]
            for g, dc in partial(word[i]).items():
                new = mono[:s] + (word[:i] + (g,) + word[i + 1:],) + mono[s + 1:]
                add_term(out, new, c * dc)
        return Tensor(self.engine, t.arity, out)

    def equal(self, a: "UnElement", b: "UnElement", mode: str = "both") -> bool:
        if a.arity != b.arity:
            raise ArityError(f"arity {a.arity} vs {b.arity}")
        if mode not in MODES:
            raise ValueError(f"unknown oracle mode {mode!r}")
        diff = a.tensor - b.tensor
        rewrite = span = None
        if mode in ("rewrite", "both"):
            rewrite = self.canonical(diff).is_zero()
        if mode in ("span", "both"):
            span = self.in_relations(diff)
        if mode == "both" and rewrite != span:
            raise OracleDisagreement(f"rewrite={rewrite} span={span} on a difference of {len(diff)} terms")
        return rewrite if rewrite is not None else span


# ---------------------------------------------------------------------------
# String model


class StringUnSpace(UnSpace):
    model: StringModel

    def __init__(self, model: StringModel, engine: PBWEngine | None = None, support_cap: int = DEFAULT_SUPPORT_CAP):
        if not isinstance(model, StringModel):
            raise TypeError("StringUnSpace needs a StringModel")
        super().__init__(model, engine, support_cap)
        self._canon_memo: Dict[Mono, Tuple[Mono, Fraction] | None] = {}

    def canonical_mono(self, mono: Mono) -> Tuple[Mono, Fraction] | None:
        """Representative ``(mono', c)`` with ``mono == c * mono'``, or None if zero."""
        hit = self._canon_memo.get(mono, False)
        if hit is not False:
            return hit
        s, i = h_position(mono)
        a = mono[s][i][1]
        forms = [(slot, l[1]) for slot, w in enumerate(mono) for l in w if l[0] == 1]
        if not forms:
            res: Tuple[Mono, Fraction] | None = (mono, ONE)
        elif a == 0:
            res = None
        else:
            lowest = min(forms)
            if lowest >= (s, a - 1):
                res = (mono, ONE)
            else:
                slot0, m0 = lowest
                words = [list(w) for w in mono]
                words[s][i] = (1, a - 1)
                words[slot0].remove((1, m0))
                words[slot0].append((H_KIND, m0 + 1))
                for idx in {s, slot0}:
                    words[idx].sort()
                res = (tuple(tuple(w) for w in words), Fraction(a, m0 + 1))
        self._canon_memo[mono] = res
        return res

    def canonical(self, t: Tensor) -> Tensor:
        out: Terms = {}
        for mono, c in t.terms.items():
            hit = self.canonical_mono(mono)
            if hit is not None:
                add_term(out, hit[0], c * hit[1])
        return Tensor(self.engine, t.arity, out, normalized=True)

    # span oracle -------------------------------------------------------------------
    def _instances(self, mono: Mono) -> Iterable[Dict[Mono, Fraction]]:
        """Raw relation instances whose support contains ``mono``."""
        s, i = h_position(mono)
        a = mono[s][i][1]
        occupied = sorted({(slot, l[1]) for slot, w in enumerate(mono) for l in w if l[0] == 1})
        if a == 0 and occupied:
            # u constant: x d(1) y v z = 0 = x 1 y d(v) z
            yield {mono: ONE}
            return
        for slot0, m0 in occupied:
            # L = x^m0 dx in slot0 equals d(u) for u = x^(m0+1)/(m0+1)
            words = [list(w) for w in mono]
            words[s][i] = (1, a - 1)
            words[slot0].remove((1, m0))
            words[slot0].append((H_KIND, m0 + 1))
            for idx in {s, slot0}:
                words[idx].sort()
            partner = tuple(tuple(w) for w in words)
            yield {mono: ONE, partner: -Fraction(a, m0 + 1)}

    def in_relations(self, t: Tensor) -> bool:
        if t.is_zero():
            return True
        self.check_an(t)
        index: Dict[Mono, int] = {}
        queue: List[Mono] = []

        def see(m: Mono) -> None:
            if m not in index:
                if len(index) >= self.support_cap:
                    raise SpanCapExceeded(f"span closure exceeded {self.support_cap} monomials")
                index[m] = len(index)
                queue.append(m)

        for m in t.terms:
            see(m)
        rows: List[Dict[int, Fraction]] = []
        pos = 0
        while pos < len(queue):
            m = queue[pos]
            pos += 1
            for inst in self._instances(m):
                for key in inst:
                    see(key)
                rows.append({index[key]: c for key, c in inst.items()})
        target = {index[m]: c for m, c in t.terms.items()}
        ncols = len(index)
        return _rank(rows, ncols) == _rank(rows + [target], ncols)

    def beta_tensor(self, t: Tensor) -> Tensor:
        out: Terms = {}
        for mono, c in t.terms.items():
            s, i = h_position(mono)
            a = mono[s][i][1]
            if a == 0:
                continue
            word = list(mono[s])
            word[i] = (1, a - 1)
            word.sort()
            add_term(out, mono[:s] + (tuple(word),) + mono[s + 1:], c * a)
        return Tensor(self.engine, t.arity, out, normalized=True)


# ---------------------------------------------------------------------------
# finite-dimensional models


class FiniteUnSpace(UnSpace):
    """Quotient by linear algebra on relation instances up to a filtration bound.

    The relation subspace is ``U(g^n) . span{d(u)_i v_j - u_i d(v)_j}``.
    Elements are reduced against the PBW normal forms of ``w . rel`` with
    ``w`` an ordered g-monomial of total length at most ``L - 2 + slack``,
    where ``L`` is the largest monomial length in the input.  This is exact
    whenever the bound captures the relevant part of the relation space; it
    is used for small property-test models only.
    """

    exact_normal_form = False

    def __init__(self, model: FiniteCrossedModule, engine: PBWEngine | None = None,
                 support_cap: int = DEFAULT_SUPPORT_CAP, slack: int = 1):
        super().__init__(model, engine, support_cap)
        self.slack = slack
        self._bases: Dict[Tuple[int, int], Tuple[Dict[Mono, int], List[Tuple[int, Dict[int, Fraction]]]]] = {}

    def _g_monomials(self, n: int, length: int) -> List[Mono]:
        g = self.model.g_basis()
        out: List[Mono] = []

        def words_upto(k: int) -> List[Word]:
            res: List[Word] = [()]
            frontier: List[Word] = [()]
            for _ in range(k):
                frontier = [w + (l,) for w in frontier for l in g if not w or w[-1] <= l]
                res.extend(frontier)
            return res

        per_slot = words_upto(length)
        for combo in product(per_slot, repeat=n):
            if sum(len(w) for w in combo) <= length:
                out.append(tuple(combo))
        return out

    def _relation_rows(self, n: int, bound: int) -> List[Tensor]:
        h = self.model.h_basis()
        if not h:
            return []
        eng = self.engine
        gens: List[Tensor] = []
        for u, v in product(h, repeat=2):
            for i, j in product(range(n), repeat=2):
                du = Tensor.from_letters(eng, n, i, self.model.partial(u))
                vj = Tensor.from_letters(eng, n, j, {v: ONE})
                ui = Tensor.from_letters(eng, n, i, {u: ONE})
                dv = Tensor.from_letters(eng, n, j, self.model.partial(v))
                rel = du * vj - ui * dv
                if not rel.is_zero():
                    gens.append(rel)
        rows = []
        for w in self._g_monomials(n, max(bound - 2, 0)):
            wt = Tensor(eng, n, {w: ONE}, normalized=True)
            for rel in gens:
                row = wt * rel
                if not row.is_zero():
                    rows.append(row)
        return rows

    def _echelon(self, n: int, bound: int):
        key = (n, bound)
        hit = self._bases.get(key)
        if hit is not None:
            return hit
        index: Dict[Mono, int] = {}
        pivots: Dict[int, Dict[int, Fraction]] = {}
        for row in self._relation_rows(n, bound):
            vec: Dict[int, Fraction] = {}
            for m, c in row.terms.items():
                if m not in index:
                    if len(index) >= self.support_cap:
                        raise SpanCapExceeded(f"relation basis exceeded {self.support_cap} monomials")
                    index[m] = len(index)
                vec[index[m]] = c
            vec = self._reduce(vec, pivots)
            if vec:
                p = max(vec)
                inv = 1 / vec[p]
                vec = {k: v * inv for k, v in vec.items()}
                for other in pivots.values():
                    if p in other:
                        add_into(other, vec, -other[p])
                pivots[p] = vec
        res = (index, pivots)
        self._bases[key] = res
        return res

    @staticmethod
    def _reduce(vec: Dict[int, Fraction], pivots: Mapping[int, Dict[int, Fraction]]) -> Dict[int, Fraction]:
        vec = dict(vec)
        while True:
            hits = set(vec) & set(pivots)
            if not hits:
                return vec
            p = max(hits)
            add_into(vec, pivots[p], -vec[p])

    def _bound(self, t: Tensor) -> int:
        return max((sum(len(w) for w in m) for m in t.terms), default=0) + self.slack

    def canonical(self, t: Tensor) -> Tensor:
        if t.is_zero() or not self.model.h_basis():
            return Tensor.zero(self.engine, t.arity)
        index, pivots = self._echelon(t.arity, self._bound(t))
        reverse = {i: m for m, i in index.items()}
        extra: Dict[Mono, int] = {}
        vec: Dict[int, Fraction] = {}
        for m, c in t.terms.items():
            if m in index:
                vec[index[m]] = c
            else:
                extra[m] = c
        vec = self._reduce(vec, pivots)
        out: Terms = {reverse[i]: c for i, c in vec.items()}
        out.update(extra)
        return Tensor(self.engine, t.arity, out, normalized=True)

    def in_relations(self, t: Tensor) -> bool:
        if t.is_zero():
            return True
        rows = self._relation_rows(t.arity, self._bound(t))
        index: Dict[Mono, int] = {}
        mats: List[Dict[int, Fraction]] = []
        for row in rows + [t]:
            vec = {}
            for m, c in row.terms.items():
                vec[index.setdefault(m, len(index))] = c
            mats.append(vec)
        return _rank(mats[:-1], len(index)) == _rank(mats, len(index))


def un_space_for(model: CrossedModuleModel, engine: PBWEngine | None = None, **kw) -> UnSpace:
    if isinstance(model, StringModel):
        return StringUnSpace(model, engine, **kw)
    if isinstance(model, FiniteCrossedModule):
        return FiniteUnSpace(model, engine, **kw)
    raise TypeError(f"no U^(n) engine for {type(model).__name__}")


# ---------------------------------------------------------------------------
# elements


class UnElement:
    """Class in ``U^(n)`` held by its canonical representative."""

    __slots__ = ("space", "arity", "tensor")

    def __init__(self, space: UnSpace, arity: int, tensor: Tensor):
        self.space = space
        self.arity = arity
        self.tensor = tensor

    def _lift(self, t: Tensor) -> "UnElement":
        return UnElement(self.space, t.arity, self.space.canonical(t))

    def _check(self, other: "UnElement") -> None:
        if not isinstance(other, UnElement):
            raise TypeError(f"expected UnElement, got {type(other).__name__}")
        if other.arity != self.arity:
            raise ArityError(f"arity {self.arity} vs {other.arity}")
        if other.space is not self.space:
            raise ValueError("elements of different quotient spaces")

    def __add__(self, other: "UnElement") -> "UnElement":
        self._check(other)
        return UnElement(self.space, self.arity, self.tensor + other.tensor)

    def __sub__(self, other: "UnElement") -> "UnElement":
        self._check(other)
        return UnElement(self.space, self.arity, self.tensor - other.tensor)

    def __neg__(self) -> "UnElement":
        return UnElement(self.space, self.arity, -self.tensor)

    def scale(self, c: Any) -> "UnElement":
        return UnElement(self.space, self.arity, self.tensor.scale(c))

    def __mul__(self, other: Any) -> "UnElement":
        if isinstance(other, Tensor):
            return self._lift(self.tensor * other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "UnElement":
        if isinstance(other, Tensor):
            return self._lift(other * self.tensor)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def is_zero(self) -> bool:
        if self.space.exact_normal_form:
            return self.tensor.is_zero()
        return self.space.canonical(self.tensor).is_zero()

    def equals(self, other: "UnElement", mode: str = "rewrite") -> bool:
        return self.space.equal(self, other, mode)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnElement):
            return NotImplemented
        return self.arity == other.arity and self.tensor == other.tensor

    def __hash__(self) -> int:
        return hash(self.tensor)

    def __len__(self) -> int:
        return len(self.tensor)

    # structure ----------------------------------------------------------------------
    def beta(self) -> Tensor:
        return self.space.beta_tensor(self.tensor)

    def permute(self, p: Perm) -> "UnElement":
        return self._lift(self.tensor.permute(p))

    def insert(self, positions: Sequence[int], n: int) -> "UnElement":
        return self._lift(self.tensor.insert(positions, n))

    def tensor_right(self, l: Tensor) -> "UnElement":
        """``a (x) l``."""
        return self._lift(self.tensor.tensor(l))

    def tensor_left(self, l: Tensor) -> "UnElement":
        """``l (x) a``."""
        return self._lift(l.tensor(self.tensor))

    def g_act(self, x: Mapping[Letter, Fraction]) -> "UnElement":
        d = diagonal(self.space.engine, x, self.arity)
        return self._lift(d * self.tensor - self.tensor * d)

    def format(self) -> str:
        return self.tensor.format()

    def __repr__(self) -> str:
        return f"U<{self.arity}>({self.format()})"


def un_normalize(space: UnSpace, t: Tensor) -> UnElement:
    return space.element(t)


def un_equal(a: UnElement, b: UnElement, mode: str = "both") -> bool:
    return a.space.equal(a, b, mode)


def beta_un(a: UnElement) -> Tensor:
    return a.beta()


def h_act(space: UnSpace, v: Mapping[Letter, Fraction], r: Tensor) -> UnElement:
    """``v > r = D(v) r - r D(v)`` for ``v`` in ``h``."""
    d = diagonal(space.engine, v, r.arity)
    return space.element(d * r - r * d)


def un_tensor(a: UnElement, l: Tensor) -> UnElement:
    return a.tensor_right(l)


def relation_instance(space: UnSpace, n: int, x: Mono, u: Tuple[int, Letter], y: Mono,
                      v: Tuple[int, Letter], z: Mono) -> Tensor:
    """PBW form of ``x d(u) y v z - x u y d(v) z`` for ``u`` in slot ``u[0]`` and ``v`` in slot ``v[0]``.

    ``x``, ``y``, ``z`` are n-tuples of g-words.  The result lies in the
    relation subspace by definition; it is used to test both oracles.
    """
    eng = space.engine
    model = space.model
    X = Tensor(eng, n, {x: ONE})
    Y = Tensor(eng, n, {y: ONE})
    Z = Tensor(eng, n, {z: ONE})
    du = Tensor.from_letters(eng, n, u[0], model.partial(u[1]))
    uu = Tensor.from_letters(eng, n, u[0], {u[1]: ONE})
    vv = Tensor.from_letters(eng, n, v[0], {v[1]: ONE})
    dv = Tensor.from_letters(eng, n, v[0], model.partial(v[1]))
    return X * du * Y * vv * Z - X * uu * Y * dv * Z
