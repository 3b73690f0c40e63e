"""Differential crossed modules ``d: h -> g`` given by bases and structure maps.

Letters (basis elements) are small integer tuples ``(kind, index)`` so that
the natural tuple order is the PBW order used everywhere.  Kind 2 is
reserved for the basis of ``h``; kinds 0 and 1 belong to ``g``.

Two families of models are provided:

* :class:`StringModel`, the polynomial model ``F0 -> F1 x| sl2`` with the
  cocycle twisted bracket.  Its ``g`` basis is ``f < k < e < dx < x dx < ...``
  and its ``h`` basis is ``1 < x < x^2 < ...``.
* :class:`FiniteCrossedModule`, built from explicit structure constants (for
  instance parsed from a model file), used for property tests and for the
  degenerate ``h = 0`` case.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra_core import ONE, ZERO, Terms, add_into, add_term, as_scalar

Letter = Tuple[int, int]
H_KIND = 2


class ModelError(ValueError):
    """Raised for malformed or inconsistent crossed-module data."""


# ---------------------------------------------------------------------------
# polynomials in one variable: dict degree -> Fraction

Poly = Dict[int, Fraction]


def poly_clean(p: Mapping[int, Any]) -> Poly:
    return {d: as_scalar(c) for d, c in p.items() if c}


def poly_add(p: Poly, q: Poly, cq: Fraction = ONE) -> Poly:
    out = dict(p)
    add_into(out, q, cq)
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for a, ca in p.items():
        for b, cb in q.items():
            add_term(out, a + b, ca * cb)
    return out


def poly_deriv(p: Poly) -> Poly:
    return {d - 1: d * c for d, c in p.items() if d}


def poly_eval0(p: Poly) -> Fraction:
    return p.get(0, ZERO)


def lie_derivative(field: Poly, target: Poly, kind: str) -> Poly:
    """Action of ``field(x) d/dx`` on a function or on a 1-form ``target(x) dx``."""
    field, target = poly_clean(field), poly_clean(target)
    if kind == "function":
        return poly_mul(field, poly_deriv(target))
    if kind == "form":
        return poly_add(poly_mul(field, poly_deriv(target)), poly_mul(poly_deriv(field), target))
    raise ValueError(f"unknown target kind {kind!r}")


def vector_field_bracket(p: Poly, q: Poly) -> Poly:
    return poly_add(poly_mul(p, poly_deriv(q)), poly_mul(poly_deriv(p), q), -ONE)


def alpha_cocycle(p: Poly, q: Poly) -> Poly:
    """The F1-valued 2-cocycle: half the Wronskian-type determinant of p', q'."""
    p1, q1 = poly_deriv(poly_clean(p)), poly_deriv(poly_clean(q))
    det = poly_add(poly_mul(p1, poly_deriv(q1)), poly_mul(poly_deriv(p1), q1), -ONE)
    return {d: c / 2 for d, c in det.items()}


def q_primitive(w: Poly) -> Poly:
    """Primitive of ``w(x) dx`` with vanishing constant term."""
    return {d + 1: c / (d + 1) for d, c in poly_clean(w).items()}


def de_rham(u: Poly) -> Poly:
    return poly_deriv(u)


def godbillon_vey(p: Poly, q: Poly, r: Poly) -> Fraction:
    """Half the 3x3 determinant of values, first and second derivatives at 0."""
    rows = []
    for fn in (p, q, r):
        d1 = poly_deriv(fn)
        rows.append((poly_eval0(fn), poly_eval0(d1), poly_eval0(poly_deriv(d1))))
    (a, b, c), (d, e, f), (g, h, i) = zip(*rows)
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return det / 2


# ---------------------------------------------------------------------------
# generic interface


class CrossedModuleModel:
    """Abstract based differential crossed module.

    Subclasses implement the structure maps on letters.  All results are
    sparse ``{letter: Fraction}`` dictionaries and must be treated as
    read-only (they are cached).
    """

    name = "crossed-module"

    # structure maps -------------------------------------------------------
    def g_bracket(self, a: Letter, b: Letter) -> Terms:
        raise NotImplementedError

    def action(self, x: Letter, u: Letter) -> Terms:
        raise NotImplementedError

    def partial(self, u: Letter) -> Terms:
        raise NotImplementedError

    def h_bracket(self, u: Letter, v: Letter) -> Terms:
        raise NotImplementedError

    # enumeration ------------------------------------------------------------
    def g_basis(self, degree_bound: int | None = None) -> List[Letter]:
        raise NotImplementedError

    def h_basis(self, degree_bound: int | None = None) -> List[Letter]:
        raise NotImplementedError

    def letter_name(self, letter: Letter) -> str:
        raise NotImplementedError

    @property
    def h_is_zero(self) -> bool:
        return not self.h_basis(0)

    # derived ---------------------------------------------------------------
    @staticmethod
    def is_h(letter: Letter) -> bool:
        return letter[0] == H_KIND

    def e_bracket(self, a: Letter, b: Letter) -> Terms:
        """Bracket in the semidirect product ``e = h x| g``."""
        ha, hb = a[0] == H_KIND, b[0] == H_KIND
        if not ha and not hb:
            return self.g_bracket(a, b)
        if not ha and hb:
            return self.action(a, b)
        if ha and not hb:
            return {k: -v for k, v in self.action(b, a).items()}
        return self.h_bracket(a, b)

    def apply_partial(self, terms: Mapping[Letter, Fraction]) -> Terms:
        out: Terms = {}
        for u, c in terms.items():
            add_into(out, self.partial(u), c)
        return out

    def apply_action(self, x: Mapping[Letter, Fraction], u: Mapping[Letter, Fraction]) -> Terms:
        out: Terms = {}
        for a, ca in x.items():
            for b, cb in u.items():
                add_into(out, self.action(a, b), ca * cb)
        return out

    def bracket_terms(self, x: Mapping[Letter, Fraction], y: Mapping[Letter, Fraction]) -> Terms:
        out: Terms = {}
        for a, ca in x.items():
            for b, cb in y.items():
                add_into(out, self.e_bracket(a, b), ca * cb)
        return out

    def format_terms(self, terms: Mapping[Letter, Fraction]) -> str:
        if not terms:
            return "0"
        return " + ".join(f"{c}*{self.letter_name(l)}" for l, c in sorted(terms.items()))


def check_crossed_module(cm: CrossedModuleModel, degree_bound: int = 3) -> Dict[str, List[str]]:
    """Exhaustively check the crossed-module axioms on enumerated bases.

    Returns a mapping from axiom name to the list of witnesses that failed
    (empty lists everywhere means the model is valid up to the bound).
    """
    g = cm.g_basis(degree_bound)
    h = cm.h_basis(degree_bound)
    name = cm.letter_name
    failures: Dict[str, List[str]] = {
        "antisymmetry": [], "jacobi": [], "h_antisymmetry": [], "h_jacobi": [],
        "action_lie": [], "action_derivation": [], "equivariance": [], "peiffer": [],
    }

    def brk(x: Terms, y: Terms) -> Terms:
        return cm.bracket_terms(x, y)

    def unit(l: Letter) -> Terms:
        return {l: ONE}

    for a, b in product(g, repeat=2):
        total = dict(cm.g_bracket(a, b))
        add_into(total, cm.g_bracket(b, a))
        if total:
            failures["antisymmetry"].append(f"[{name(a)},{name(b)}]")
    for a, b, c in combinations(g, 3):
        total: Terms = {}
        add_into(total, brk(unit(a), brk(unit(b), unit(c))))
        add_into(total, brk(unit(b), brk(unit(c), unit(a))))
        add_into(total, brk(unit(c), brk(unit(a), unit(b))))
        if total:
            failures["jacobi"].append(f"({name(a)},{name(b)},{name(c)})")
    for u, v in product(h, repeat=2):
        total = dict(cm.h_bracket(u, v))
        add_into(total, cm.h_bracket(v, u))
        if total:
            failures["h_antisymmetry"].append(f"[{name(u)},{name(v)}]")
    for u, v, w in combinations(h, 3):
        total = {}
        add_into(total, brk(unit(u), brk(unit(v), unit(w))))
        add_into(total, brk(unit(v), brk(unit(w), unit(u))))
        add_into(total, brk(unit(w), brk(unit(u), unit(v))))
        if total:
            failures["h_jacobi"].append(f"({name(u)},{name(v)},{name(w)})")
    for a, b in combinations(g, 2):
        for u in h:
            lhs = cm.apply_action(cm.g_bracket(a, b), unit(u))
            add_into(lhs, cm.apply_action(unit(a), cm.action(b, u)), -ONE)
            add_into(lhs, cm.apply_action(unit(b), cm.action(a, u)))
            if lhs:
                failures["action_lie"].append(f"[{name(a)},{name(b)}]>{name(u)}")
    for a in g:
        for u, v in combinations(h, 2):
            lhs = cm.apply_action(unit(a), cm.h_bracket(u, v))
            add_into(lhs, brk(cm.action(a, u), unit(v)), -ONE)
            add_into(lhs, brk(unit(u), cm.action(a, v)), -ONE)
            if lhs:
                failures["action_derivation"].append(f"{name(a)}>[{name(u)},{name(v)}]")
        for u in h:
            lhs = cm.apply_partial(cm.action(a, u))
            add_into(lhs, brk(unit(a), cm.partial(u)), -ONE)
            if lhs:
                failures["equivariance"].append(f"d({name(a)}>{name(u)})")
    for u, v in product(h, repeat=2):
        lhs = cm.apply_action(cm.partial(v), unit(u))
        add_into(lhs, cm.h_bracket(v, u), -ONE)
        if lhs:
            failures["peiffer"].append(f"d({name(v)})>{name(u)}")
    return failures


# ---------------------------------------------------------------------------
# the String model

SL2_NAMES = ("f", "k", "e")
F_LETTER: Letter = (0, 0)
K_LETTER: Letter = (0, 1)
E_LETTER: Letter = (0, 2)
SL2_LETTERS: Tuple[Letter, ...] = (F_LETTER, K_LETTER, E_LETTER)
# f = d/dx, k = x d/dx, e = x^2 d/dx
SL2_FIELDS: Dict[int, Poly] = {0: {0: ONE}, 1: {1: ONE}, 2: {2: ONE}}


def form_letter(m: int) -> Letter:
    """The F1 basis letter ``x^m dx``."""
    return (1, m)


def poly_letter(m: int) -> Letter:
    """The F0 basis letter ``x^m``."""
    return (H_KIND, m)


def _poly_to_letters(p: Poly, kind: int) -> Terms:
    return {(kind, d): c for d, c in p.items()}


def _field_to_sl2(p: Poly) -> Terms:
    if any(d > 2 for d in p):
        raise ModelError("vector field leaves sl2")
    return {(0, d): c for d, c in p.items()}


class StringModel(CrossedModuleModel):
    """``d: F0 -> F1 x|_alpha sl2`` with ``d(u) = (du, 0)`` and ``(a, y) > u = y > u``."""

    name = "string"

    def __init__(self, degree_bound: int = 6):
        if degree_bound < 0:
            raise ValueError("degree bound must be non-negative")
        self.degree_bound = degree_bound
        self._g_cache: Dict[Tuple[Letter, Letter], Terms] = {}
        self._a_cache: Dict[Tuple[Letter, Letter], Terms] = {}

    # structure -------------------------------------------------------------
    def g_bracket(self, a: Letter, b: Letter) -> Terms:
        key = (a, b)
        hit = self._g_cache.get(key)
        if hit is not None:
            return hit
        ka, kb = a[0], b[0]
        if ka == H_KIND or kb == H_KIND:
            raise ModelError("g_bracket called on an h letter")
        if ka == 0 and kb == 0:
            p, q = SL2_FIELDS[a[1]], SL2_FIELDS[b[1]]
            out = _field_to_sl2(vector_field_bracket(p, q))
            out.update(_poly_to_letters(alpha_cocycle(p, q), 1))
        elif ka == 0 and kb == 1:
            out = _poly_to_letters(lie_derivative(SL2_FIELDS[a[1]], {b[1]: ONE}, "form"), 1)
        elif ka == 1 and kb == 0:
            out = {l: -c for l, c in self.g_bracket(b, a).items()}
        else:
            out = {}
        self._g_cache[key] = out
        return out

    def action(self, x: Letter, u: Letter) -> Terms:
        key = (x, u)
        hit = self._a_cache.get(key)
        if hit is not None:
            return hit
        if x[0] == 0:
            out = _poly_to_letters(lie_derivative(SL2_FIELDS[x[1]], {u[1]: ONE}, "function"), H_KIND)
        else:
            out = {}
        self._a_cache[key] = out
        return out

    def partial(self, u: Letter) -> Terms:
        m = u[1]
        return {(1, m - 1): Fraction(m)} if m else {}

    def h_bracket(self, u: Letter, v: Letter) -> Terms:
        return {}

    # enumeration -----------------------------------------------------------
    def g_basis(self, degree_bound: int | None = None) -> List[Letter]:
        d = self.degree_bound if degree_bound is None else degree_bound
        return list(SL2_LETTERS) + [form_letter(m) for m in range(d + 1)]

    def h_basis(self, degree_bound: int | None = None) -> List[Letter]:
        d = self.degree_bound if degree_bound is None else degree_bound
        return [poly_letter(m) for m in range(d + 1)]

    def sl2_basis(self) -> List[Letter]:
        return list(SL2_LETTERS)

    def letter_name(self, letter: Letter) -> str:
        kind, m = letter
        if kind == 0:
            return SL2_NAMES[m]
        mono = "" if m == 0 else ("x" if m == 1 else f"x^{m}")
        if kind == 1:
            return f"{mono}dx" if mono else "dx"
        return mono or "1"

    # String-specific helpers ------------------------------------------------
    @staticmethod
    def is_form_letter(letter: Letter) -> bool:
        return letter[0] == 1

    def primitive_letter(self, letter: Letter) -> Tuple[Letter, Fraction]:
        """``Q`` on an F1 letter: ``x^m dx -> x^(m+1)/(m+1)``."""
        m = letter[1]
        return poly_letter(m + 1), Fraction(1, m + 1)

    def unit_h(self) -> Letter:
        """The constant polynomial spanning ``ker(d)``."""
        return poly_letter(0)

    def omega(self, x: Letter, y: Letter) -> Terms:
        """``omega(X, Y) = Q(alpha(X, Y))`` on sl2 letters, valued in F0."""
        p, q = SL2_FIELDS[x[1]], SL2_FIELDS[y[1]]
        return _poly_to_letters(q_primitive(alpha_cocycle(p, q)), H_KIND)

    def phi(self, x: Letter, y: Letter, z: Letter) -> Terms:
        """The F0-valued coboundary of ``omega``."""
        return coboundary(self.omega, self._sl2_action_h, self._sl2_bracket, x, y, z)

    def _sl2_bracket(self, x: Letter, y: Letter) -> Terms:
        return {l: c for l, c in self.g_bracket(x, y).items() if l[0] == 0}

    def _sl2_action_h(self, x: Letter, u: Terms) -> Terms:
        return self.apply_action({x: ONE}, u)


def coboundary(
    w: Callable[[Letter, Letter], Terms],
    act: Callable[[Letter, Terms], Terms],
    bracket: Callable[[Letter, Letter], Terms],
    x: Letter,
    y: Letter,
    z: Letter,
) -> Terms:
    """Six-term coboundary of an antisymmetric 2-cochain ``w`` at ``(x, y, z)``.

    ``delta(w)(X,Y,Z) = X>w(Y,Z) + Y>w(Z,X) + Z>w(X,Y)
    + w(X,[Y,Z]) + w(Y,[Z,X]) + w(Z,[X,Y])``.
    """
    out: Terms = {}

    def w_lin(a: Letter, terms: Terms) -> Terms:
        acc: Terms = {}
        for b, c in terms.items():
            add_into(acc, w(a, b), c)
        return acc

    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        add_into(out, act(a, w(b, c)))
        add_into(out, w_lin(a, bracket(b, c)))
    return out


def k_invariant(
    cm: CrossedModuleModel,
    section: Callable[[Letter], Terms],
    section_prime: Callable[[Terms], Terms],
    coker_bracket: Callable[[Letter, Letter], Terms],
    x: Letter,
    y: Letter,
    z: Letter,
) -> Terms:
    """The ``ker(d)``-valued 3-cocycle attached to a crossed module.

    ``section`` maps a cokernel basis letter to ``g``; ``section_prime`` maps
    an element of ``d(h)`` back to ``h``; ``coker_bracket`` is the bracket of
    the cokernel in the same letters.  With
    ``b(Y, Z) = s'(s([Y,Z]) - [s(Y), s(Z)])`` the result is
    ``b([X,Y],Z) + cyclic - s(X) > b(Y,Z) - cyclic``.
    """

    def s_lin(terms: Terms) -> Terms:
        acc: Terms = {}
        for l, c in terms.items():
            add_into(acc, section(l), c)
        return acc

    def b(u: Letter, v: Letter) -> Terms:
        diff = s_lin(coker_bracket(u, v))
        add_into(diff, cm.bracket_terms(section(u), section(v)), -ONE)
        if not diff:
            return {}
        back = section_prime(diff)
        check = cm.apply_partial(back)
        add_into(check, diff, -ONE)
        if check:
            raise ModelError("section s' does not invert d on the given element")
        return back

    def b_lin(terms: Terms, v: Letter) -> Terms:
        acc: Terms = {}
        for l, c in terms.items():
            add_into(acc, b(l, v), c)
        return acc

    out: Terms = {}
    for a, bb, c in ((x, y, z), (y, z, x), (z, x, y)):
        add_into(out, b_lin(coker_bracket(a, bb), c))
        add_into(out, cm.apply_action(section(a), b(bb, c)), -ONE)
    if cm.apply_partial(out):
        raise ModelError("k-invariant left ker(d); sections are inconsistent")
    return out


def string_k_invariant(model: StringModel, x: Letter, y: Letter, z: Letter) -> Terms:
    """k-invariant of the String model with ``s(X) = (0, X)`` and ``s' = Q``."""

    def section(l: Letter) -> Terms:
        return {l: ONE}

    def section_prime(terms: Terms) -> Terms:
        out: Terms = {}
        for l, c in terms.items():
            if l[0] != 1:
                raise ModelError(f"{model.letter_name(l)} is not in the image of d")
            p, s = model.primitive_letter(l)
            add_term(out, p, c * s)
        return out

    return k_invariant(model, section, section_prime, model._sl2_bracket, x, y, z)


def killing_form(bracket: Callable[[Letter, Letter], Terms], basis: Sequence[Letter], x: Letter, y: Letter) -> Fraction:
    """``Tr(ad_x ad_y)`` computed from structure constants on ``basis``."""
    total = ZERO
    for b in basis:
        inner = bracket(y, b)
        outer: Terms = {}
        for l, c in inner.items():
            add_into(outer, bracket(x, l), c)
        total += outer.get(b, ZERO)
    return total


# ---------------------------------------------------------------------------
# finite-dimensional models


class FiniteCrossedModule(CrossedModuleModel):
    """A crossed module with finite bases and tabulated structure constants.

    ``g_bracket`` and ``h_bracket`` map index pairs ``(i, j)`` to sparse
    ``{k: coeff}``; ``partial`` maps an h index to ``{g index: coeff}``;
    ``action`` maps ``(g index, h index)`` to ``{h index: coeff}``.  Tables are
    taken literally: antisymmetry is checked, never filled in.
    """

    def __init__(
        self,
        g_names: Sequence[str],
        h_names: Sequence[str],
        g_bracket: Mapping[Tuple[int, int], Mapping[int, Any]],
        h_bracket: Mapping[Tuple[int, int], Mapping[int, Any]] | None = None,
        partial: Mapping[int, Mapping[int, Any]] | None = None,
        action: Mapping[Tuple[int, int], Mapping[int, Any]] | None = None,
        name: str = "finite",
    ):
        self.name = name
        self.g_names = list(g_names)
        self.h_names = list(h_names)
        self._g = {key: {(0, k): as_scalar(c) for k, c in val.items() if c} for key, val in g_bracket.items()}
        self._h = {key: {(H_KIND, k): as_scalar(c) for k, c in val.items() if c} for key, val in (h_bracket or {}).items()}
        self._d = {j: {(0, k): as_scalar(c) for k, c in val.items() if c} for j, val in (partial or {}).items()}
        self._a = {key: {(H_KIND, k): as_scalar(c) for k, c in val.items() if c} for key, val in (action or {}).items()}
        for i, j in self._g:
            self._index_check(i, len(self.g_names), "g")
            self._index_check(j, len(self.g_names), "g")
        self._check_antisymmetric(self._g, self.g_names, "g")
        self._check_antisymmetric(self._h, self.h_names, "h")

    @staticmethod
    def _index_check(i: int, size: int, which: str) -> None:
        if not 0 <= i < size:
            raise ModelError(f"{which} basis index {i} out of range")

    @staticmethod
    def _check_antisymmetric(table: Mapping[Tuple[int, int], Terms], names: Sequence[str], which: str) -> None:
        for (i, j), val in table.items():
            other = table.get((j, i), {})
            total = dict(val)
            add_into(total, other)
            if total:
                raise ModelError(f"{which}_bracket is not antisymmetric at pair ({names[i]}, {names[j]})")

    def g_bracket(self, a: Letter, b: Letter) -> Terms:
        return self._g.get((a[1], b[1]), {})

    def h_bracket(self, u: Letter, v: Letter) -> Terms:
        return self._h.get((u[1], v[1]), {})

    def action(self, x: Letter, u: Letter) -> Terms:
        return self._a.get((x[1], u[1]), {})

    def partial(self, u: Letter) -> Terms:
        return self._d.get(u[1], {})

    def g_basis(self, degree_bound: int | None = None) -> List[Letter]:
        return [(0, i) for i in range(len(self.g_names))]

    def h_basis(self, degree_bound: int | None = None) -> List[Letter]:
        return [(H_KIND, j) for j in range(len(self.h_names))]

    def letter_name(self, letter: Letter) -> str:
        kind, i = letter
        return self.g_names[i] if kind == 0 else self.h_names[i]

    def g_letter(self, name: str) -> Letter:
        return (0, self.g_names.index(name))

    def h_letter(self, name: str) -> Letter:
        return (H_KIND, self.h_names.index(name))


def sl2_trivial_model() -> FiniteCrossedModule:
    """``0 -> sl2``: the degenerate crossed module with ``h = 0``."""
    f, k, e = 0, 1, 2
    bracket = {
        (f, e): {k: 2}, (e, f): {k: -2},
        (k, e): {e: 1}, (e, k): {e: -1},
        (k, f): {f: -1}, (f, k): {f: 1},
    }
    return FiniteCrossedModule(SL2_NAMES, [], bracket, name="sl2-trivial")


# ---------------------------------------------------------------------------
# model files

MODEL_FILE_VERSION = 1


def _index(names: Sequence[str], value: Any, which: str) -> int:
    if isinstance(value, bool):
        raise ModelError(f"bad {which} index {value!r}")
    if isinstance(value, int):
        if not 0 <= value < len(names):
            raise ModelError(f"{which} index {value} out of range")
        return value
    if isinstance(value, str) and value in names:
        return names.index(value)
    raise ModelError(f"unknown {which} basis element {value!r}")


def _rational(value: Any) -> Fraction:
    try:
        return as_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {value!r}") from exc


def parse_model(doc: Mapping[str, Any]) -> Tuple[FiniteCrossedModule, Dict[str, Any]]:
    """Build a :class:`FiniteCrossedModule` from a decoded model document.

    Returns the model and the optional ``tensor`` section (raw, validated
    later by the quasi-invariant layer).
    """
    if not isinstance(doc, Mapping):
        raise ModelError("model document must be an object")
    if doc.get("version") != MODEL_FILE_VERSION:
        raise ModelError(f"unsupported model version {doc.get('version')!r}")
    g_names = doc.get("g_basis")
    h_names = doc.get("h_basis", [])
    if not isinstance(g_names, list) or not all(isinstance(n, str) for n in g_names):
        raise ModelError("g_basis must be a list of names")
    if not isinstance(h_names, list) or not all(isinstance(n, str) for n in h_names):
        raise ModelError("h_basis must be a list of names")
    if len(set(g_names)) != len(g_names) or len(set(h_names)) != len(h_names):
        raise ModelError("basis names must be distinct")

    def triples(key: str, left: Sequence[str], right: Sequence[str], out: Sequence[str]):
        table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for entry in doc.get(key, []):
            if not isinstance(entry, list) or len(entry) != 4:
                raise ModelError(f"{key} entries must be [i, j, k, coeff]")
            i = _index(left, entry[0], key)
            j = _index(right, entry[1], key)
            k = _index(out, entry[2], key)
            slot = table.setdefault((i, j), {})
            slot[k] = slot.get(k, Fraction(0)) + _rational(entry[3])
        return table

    g_bracket = triples("g_bracket", g_names, g_names, g_names)
    h_bracket = triples("h_bracket", h_names, h_names, h_names)
    action = triples("action", g_names, h_names, h_names)
    partial: Dict[int, Dict[int, Fraction]] = {}
    for entry in doc.get("partial", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ModelError("partial entries must be [h, g, coeff]")
        j = _index(h_names, entry[0], "partial")
        i = _index(g_names, entry[1], "partial")
        slot = partial.setdefault(j, {})
        slot[i] = slot.get(i, Fraction(0)) + _rational(entry[2])
    model = FiniteCrossedModule(
        g_names, h_names, g_bracket, h_bracket, partial, action, name=str(doc.get("name", "file"))
    )
    return model, dict(doc.get("tensor", {}))


def load_model(path: str | Path) -> Tuple[FiniteCrossedModule, Dict[str, Any]]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc.msg})") from exc
    return parse_model(doc)
