"""Exact scalars, sparse linear combinations and decorated permutations.

Everything downstream works over the rationals.  Scalars are
:class:`fractions.Fraction` values; a linear combination is a mapping from
hashable, totally ordered monomial keys to nonzero scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, Iterator, Mapping, Sequence, Tuple

Scalar = Fraction
Terms = Dict[Any, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(value: Any) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_scalar(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def add_into(acc: Terms, terms: Mapping[Any, Fraction], coeff: Fraction = ONE) -> Terms:
    """In-place ``acc += coeff * terms``; cancelled entries are removed."""
    if not coeff:
        return acc
    for key, value in terms.items():
        new = acc.get(key, ZERO) + coeff * value
        if new:
            acc[key] = new
        else:
            acc.pop(key, None)
    return acc


def add_term(acc: Terms, key: Any, value: Fraction) -> None:
    if not value:
        return
    new = acc.get(key, ZERO) + value
    if new:
        acc[key] = new
    else:
        del acc[key]


class LinComb:
    """Immutable sparse linear combination ``sum c_m * m``.

    Keys must be hashable and mutually comparable so that iteration order
    (and hence printing) is canonical.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Hashable, Any] | Iterable[Tuple[Hashable, Any]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Terms = {}
        for key, value in items:
            add_term(acc, key, as_scalar(value))
        self._terms = acc
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: Terms) -> "LinComb":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, key: Hashable, coeff: Any = 1) -> "LinComb":
        return cls({key: coeff})

    @property
    def terms(self) -> Mapping[Hashable, Fraction]:
        return self._terms

    def items(self) -> Iterator[Tuple[Hashable, Fraction]]:
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def coefficient(self, key: Hashable) -> Fraction:
        return self._terms.get(key, ZERO)

    def support(self) -> list:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "LinComb") -> "LinComb":
        return lincomb_combine(self, other, ONE, ONE)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return lincomb_combine(self, other, ONE, -ONE)

    def __neg__(self) -> "LinComb":
        return LinComb._raw({k: -v for k, v in self._terms.items()})

    def __mul__(self, scalar: Any) -> "LinComb":
        c = as_scalar(scalar)
        if not c:
            return LinComb._raw({})
        return LinComb._raw({k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def map_keys(self, fn) -> "LinComb":
        acc: Terms = {}
        for key, value in self._terms.items():
            add_term(acc, fn(key), value)
        return LinComb._raw(acc)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{format_scalar(v)}*{k!r}" for k, v in self.items())


def lincomb_combine(a: LinComb, b: LinComb, ca: Any, cb: Any) -> LinComb:
    """Return ``ca*a + cb*b`` with vanishing coefficients pruned."""
    acc: Terms = {}
    add_into(acc, a.terms, as_scalar(ca))
    add_into(acc, b.terms, as_scalar(cb))
    return LinComb._raw(acc)


# ---------------------------------------------------------------------------
# permutations
#
# A permutation of {0..n-1} is stored as the tuple of images.  Products are
# read left to right, matching the left-to-right composition of 1-morphisms:
# (p * q)(i) = q(p(i)).  With this convention the slot action
# permute_by(p, t)[j] = t[p(j)] satisfies permute_by(p*q) = permute_by(p)
# after permute_by(q), which is exactly what associativity of 1-morphism
# composition needs.

Perm = Tuple[int, ...]


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_check(p: Sequence[int]) -> Perm:
    p = tuple(p)
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {p}")
    return p


def perm_product(p: Perm, q: Perm) -> Perm:
    if len(p) != len(q):
        raise ValueError(f"permutation size mismatch: {len(p)} vs {len(q)}")
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, image in enumerate(p):
        inv[image] = i
    return tuple(inv)


def perm_tensor(p: Perm, q: Perm) -> Perm:
    """Block sum: ``p`` on the first block, ``q`` shifted on the second."""
    shift = len(p)
    return tuple(p) + tuple(shift + image for image in q)


def perm_from_cycles(n: int, *cycles: Sequence[int]) -> Perm:
    """Build a permutation of ``{0..n-1}`` from 1-based cycles."""
    images = list(range(n))
    for cycle in cycles:
        c = [i - 1 for i in cycle]
        for pos, point in enumerate(c):
            images[point] = c[(pos + 1) % len(c)]
    return perm_check(images)


def perm_cycles(p: Perm) -> str:
    """1-based cycle notation, ``()`` for the identity."""
    seen = set()
    parts = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        nxt = p[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = p[nxt]
        parts.append("(" + " ".join(str(i + 1) for i in cycle) + ")")
    return "".join(parts) or "()"


def block_permutation(n: int, m: int) -> Perm:
    """sigma(i) = i+m for i <= n and i-n otherwise (1-based), as 0-based images."""
    if n < 0 or m < 0:
        raise ValueError("block sizes must be non-negative")
    return tuple(i + m if i < n else i - n for i in range(n + m))


@dataclass(frozen=True, order=True)
class DecoratedPermutation:
    sigma: Perm
    k: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", perm_check(self.sigma))

    @property
    def n(self) -> int:
        return len(self.sigma)

    @classmethod
    def identity(cls, n: int, k: int = 0) -> "DecoratedPermutation":
        return cls(perm_identity(n), k)

    def is_identity(self) -> bool:
        return self.k == 0 and self.sigma == perm_identity(len(self.sigma))

    def __mul__(self, other: "DecoratedPermutation") -> "DecoratedPermutation":
        return decorated_compose(self, other)

    def tensor(self, other: "DecoratedPermutation") -> "DecoratedPermutation":
        return DecoratedPermutation(perm_tensor(self.sigma, other.sigma), self.k + other.k)

    def inverse(self) -> "DecoratedPermutation":
        return DecoratedPermutation(perm_inverse(self.sigma), -self.k)

    def __repr__(self) -> str:
        return f"({perm_cycles(self.sigma)}, {self.k})"


def decorated_compose(t1: DecoratedPermutation, t2: DecoratedPermutation) -> DecoratedPermutation:
    if t1.n != t2.n:
        raise ValueError(f"decorated permutations on {t1.n} and {t2.n} points")
    return DecoratedPermutation(perm_product(t1.sigma, t2.sigma), t1.k + t2.k)


def block_transposition(n: int, m: int) -> DecoratedPermutation:
    return DecoratedPermutation(block_permutation(n, m), 0)
