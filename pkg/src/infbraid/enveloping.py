"""PBW normal forms in tensor powers of universal enveloping algebras.

A :class:`PBWEngine` normal-orders words in ``U(e)`` for ``e = h x| g`` of a
crossed-module model; since ``g`` is a subalgebra, the same engine serves
``U(g)``.  A :class:`Tensor` is an element of ``U(e)^{(x) n}``: a sparse
combination of n-tuples of PBW-sorted words.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra_core import ONE, ZERO, Perm, Terms, add_into, add_term, as_scalar, format_scalar
from .crossed_modules import CrossedModuleModel, Letter

Word = Tuple[Letter, ...]
Mono = Tuple[Word, ...]


class ArityError(ValueError):
    """Operands live in tensor powers of different arity."""


class PBWEngine:
    """Normal ordering ``x_j x_i -> x_i x_j + [x_j, x_i]`` for letters ``j > i``.

    The default schedule rewrites the leftmost inversion and is memoised.
    ``schedule="rightmost"`` or a ``random.Random`` instance select other
    rewrite orders; those are unmemoised and exist to test confluence.
    """

    def __init__(self, model: CrossedModuleModel):
        self.model = model
        self._bracket = model.e_bracket
        self._memo: Dict[Word, Terms] = {(): {(): ONE}}
        self._mul_memo: Dict[Tuple[Mono, Mono], Terms] = {}

    # single words -----------------------------------------------------------
    def normal_word(self, word: Word) -> Terms:
        memo = self._memo
        hit = memo.get(word)
        if hit is not None:
            return hit
        n = len(word)
        i = 0
        while i < n - 1 and word[i] <= word[i + 1]:
            i += 1
        if i >= n - 1:
            res = {word: ONE}
        else:
            a, b = word[i], word[i + 1]
            head, tail = word[:i], word[i + 2:]
            res = dict(self.normal_word(head + (b, a) + tail))
            for c, coeff in self._bracket(a, b).items():
                add_into(res, self.normal_word(head + (c,) + tail), coeff)
        memo[word] = res
        return res

    def normal_word_with(self, word: Word, schedule: str | random.Random) -> Terms:
        """Unmemoised normal ordering with an explicit rewrite schedule."""
        inversions = [i for i in range(len(word) - 1) if word[i] > word[i + 1]]
        if not inversions:
            return {word: ONE}
        if schedule == "leftmost":
            i = inversions[0]
        elif schedule == "rightmost":
            i = inversions[-1]
        elif isinstance(schedule, random.Random):
            i = schedule.choice(inversions)
        else:
            raise ValueError(f"unknown schedule {schedule!r}")
        a, b = word[i], word[i + 1]
        head, tail = word[:i], word[i + 2:]
        res = dict(self.normal_word_with(head + (b, a) + tail, schedule))
        for c, coeff in self._bracket(a, b).items():
            add_into(res, self.normal_word_with(head + (c,) + tail, schedule), coeff)
        return res

    # monomials ----------------------------------------------------------------
    def normal_mono(self, mono: Mono) -> Terms:
        out: Terms = {(): ONE}
        for word in mono:
            expansion = self.normal_word(word)
            if len(expansion) == 1:
                (w, c), = expansion.items()
                out = {m + (w,): v * c for m, v in out.items()}
                continue
            nxt: Terms = {}
            for m, v in out.items():
                for w, c in expansion.items():
                    add_term(nxt, m + (w,), v * c)
            out = nxt
        return out

    def mul_mono(self, m1: Mono, m2: Mono) -> Terms:
        key = (m1, m2)
        hit = self._mul_memo.get(key)
        if hit is None:
            hit = self.normal_mono(tuple(a + b for a, b in zip(m1, m2)))
            self._mul_memo[key] = hit
        return hit

    def clear_caches(self) -> None:
        self._memo = {(): {(): ONE}}
        self._mul_memo.clear()


class Tensor:
    """Element of ``U(e)^{(x) n}`` in PBW normal form (immutable by convention)."""

    __slots__ = ("engine", "arity", "terms")

    def __init__(self, engine: PBWEngine, arity: int, terms: Terms | None = None, normalized: bool = False):
        self.engine = engine
        self.arity = arity
        terms = terms or {}
        if normalized:
            self.terms = terms
        else:
            acc: Terms = {}
            for mono, c in terms.items():
                if len(mono) != arity:
                    raise ArityError(f"monomial {mono!r} does not have arity {arity}")
                add_into(acc, engine.normal_mono(tuple(tuple(w) for w in mono)), as_scalar(c))
            self.terms = acc

    # constructors -------------------------------------------------------------
    @classmethod
    def zero(cls, engine: PBWEngine, arity: int) -> "Tensor":
        return cls(engine, arity, {}, normalized=True)

    @classmethod
    def one(cls, engine: PBWEngine, arity: int, coeff: Any = 1) -> "Tensor":
        c = as_scalar(coeff)
        return cls(engine, arity, {((),) * arity: c} if c else {}, normalized=True)

    @classmethod
    def from_letters(cls, engine: PBWEngine, arity: int, slot: int, letters: Mapping[Letter, Fraction]) -> "Tensor":
        """``1 (x) ... (x) X (x) ... (x) 1`` with ``X`` (a letter combination) in ``slot``."""
        empty = [()] * arity
        terms: Terms = {}
        for l, c in letters.items():
            mono = list(empty)
            mono[slot] = (l,)
            add_term(terms, tuple(mono), as_scalar(c))
        return cls(engine, arity, terms, normalized=True)

    @classmethod
    def elementary(cls, engine: PBWEngine, *slots: Sequence[Letter], coeff: Any = 1) -> "Tensor":
        """Product tensor of the given words, normalised."""
        return cls(engine, len(slots), {tuple(tuple(s) for s in slots): as_scalar(coeff)})

    # basic algebra ------------------------------------------------------------
    def _check(self, other: "Tensor") -> None:
        if not isinstance(other, Tensor):
            raise TypeError(f"expected Tensor, got {type(other).__name__}")
        if other.arity != self.arity:
            raise ArityError(f"arity {self.arity} vs {other.arity}")
        if other.engine is not self.engine:
            raise ValueError("tensors over different engines")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        acc = dict(self.terms)
        add_into(acc, other.terms)
        return Tensor(self.engine, self.arity, acc, normalized=True)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        acc = dict(self.terms)
        add_into(acc, other.terms, -ONE)
        return Tensor(self.engine, self.arity, acc, normalized=True)

    def __neg__(self) -> "Tensor":
        return Tensor(self.engine, self.arity, {m: -c for m, c in self.terms.items()}, normalized=True)

    def scale(self, coeff: Any) -> "Tensor":
        c = as_scalar(coeff)
        if not c:
            return Tensor.zero(self.engine, self.arity)
        return Tensor(self.engine, self.arity, {m: c * v for m, v in self.terms.items()}, normalized=True)

    def __mul__(self, other: Any) -> "Tensor":
        if not isinstance(other, Tensor):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        mul = self.engine.mul_mono
        acc: Terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                add_into(acc, mul(m1, m2), c1 * c2)
        return Tensor(self.engine, self.arity, acc, normalized=True)

    def __rmul__(self, other: Any) -> "Tensor":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "Tensor") -> "Tensor":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    # structural operations --------------------------------------------------------
    def map_monos(self, fn: Callable[[Mono], Mono], arity: int | None = None, renormalize: bool = True) -> "Tensor":
        out: Terms = {}
        for mono, c in self.terms.items():
            add_term(out, fn(mono), c)
        n = self.arity if arity is None else arity
        if renormalize:
            return Tensor(self.engine, n, out)
        return Tensor(self.engine, n, out, normalized=True)

    def permute(self, p: Perm) -> "Tensor":
        """Slot action ``(p . t)[j] = t[p(j)]``; PBW order per slot is unaffected."""
        if len(p) != self.arity:
            raise ArityError(f"permutation on {len(p)} points acting on arity {self.arity}")
        return self.map_monos(lambda m: tuple(m[p[j]] for j in range(len(p))), renormalize=False)

    def flip(self) -> "Tensor":
        if self.arity != 2:
            raise ArityError("flip needs arity 2")
        return self.permute((1, 0))

    def insert(self, positions: Sequence[int], n: int) -> "Tensor":
        """Place slot ``i`` at 0-based position ``positions[i]`` of an arity-``n`` tensor."""
        positions = tuple(positions)
        if len(positions) != self.arity:
            raise ArityError(f"{len(positions)} positions for arity {self.arity}")
        if len(set(positions)) != len(positions) or any(not 0 <= p < n for p in positions):
            raise ValueError(f"bad insertion positions {positions} for arity {n}")

        def place(mono: Mono) -> Mono:
            out: List[Word] = [()] * n
            for i, p in enumerate(positions):
                out[p] = mono[i]
            return tuple(out)

        return self.map_monos(place, arity=n, renormalize=False)

    def tensor(self, other: "Tensor") -> "Tensor":
        if other.engine is not self.engine:
            raise ValueError("tensors over different engines")
        acc: Terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                add_term(acc, m1 + m2, c1 * c2)
        return Tensor(self.engine, self.arity + other.arity, acc, normalized=True)

    def pad(self, left: int, right: int) -> "Tensor":
        """``1^{(x) left} (x) self (x) 1^{(x) right}``."""
        return self.insert(range(left, left + self.arity), left + self.arity + right)

    # inspection --------------------------------------------------------------------
    def letters(self) -> set:
        return {l for mono in self.terms for w in mono for l in w}

    def has_h_letters(self) -> bool:
        return any(l[0] == 2 for l in self.letters())

    def format(self) -> str:
        if not self.terms:
            return "0"
        name = self.engine.model.letter_name
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            slots = " (x) ".join("*".join(name(l) for l in w) or "1" for w in mono)
            parts.append(f"{format_scalar(c)}*[{slots}]")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Tensor<{self.arity}>({self.format()})"


def pbw_normalize(engine: PBWEngine, arity: int, terms: Mapping[Mono, Any]) -> Tensor:
    return Tensor(engine, arity, dict(terms))


def diagonal(engine: PBWEngine, x: Mapping[Letter, Fraction], n: int) -> Tensor:
    """``sum_i 1 (x) .. (x) X (x) .. (x) 1``."""
    acc: Terms = {}
    empty = [()] * n
    for i in range(n):
        for l, c in x.items():
            mono = list(empty)
            mono[i] = (l,)
            add_term(acc, tuple(mono), as_scalar(c))
    return Tensor(engine, n, acc, normalized=True)


def letter_diagonal(engine: PBWEngine, letter: Letter, n: int) -> Tensor:
    return diagonal(engine, {letter: ONE}, n)


def g_act(x: Mapping[Letter, Fraction], t: Tensor) -> Tensor:
    """Diagonal adjoint action ``X > t = D(X) t - t D(X)``."""
    d = diagonal(t.engine, x, t.arity)
    return d * t - t * d


def classical_four_term_defect(r: Tensor) -> Tensor:
    """``[r^12 + r^13, r^23]`` in arity 3."""
    if r.arity != 2:
        raise ArityError("the 4-term defect needs an arity-2 tensor")
    r12 = r.insert((0, 1), 3)
    r13 = r.insert((0, 2), 3)
    r23 = r.insert((1, 2), 3)
    return (r12 + r13).commutator(r23)
