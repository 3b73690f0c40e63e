"""Symmetric quasi-invariant tensors, the String instance and coherence.

A quasi-invariant tensor is a triple ``(r, xi, c)``: ``r`` symmetric in
``g (x) g``, ``xi: g -> U^(2)`` with ``X > r = beta(xi(X))`` and ``c`` a
``g``-invariant element of ``ker(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra_core import ONE, ZERO, Terms, add_into, add_term, as_scalar, perm_from_cycles
from .crossed_modules import (
    H_KIND,
    CrossedModuleModel,
    FiniteCrossedModule,
    Letter,
    ModelError,
    StringModel,
    _index,
    _rational,
)
from .enveloping import Tensor, g_act
from .relative_tensor import UnElement, UnSpace, h_act
from .two_category import LinearMap

F, K, E = (0, 0), (0, 1), (0, 2)


@dataclass(frozen=True)
class QuasiInvariantTensor:
    space: UnSpace
    r: Tensor
    xi: LinearMap
    c: Dict[Letter, Fraction]

    @property
    def model(self) -> CrossedModuleModel:
        return self.space.model

    def pairs(self) -> List[Tuple[Letter, Letter, Fraction]]:
        return r_pairs(self.r)

    def with_c(self, c: Mapping[Letter, Any]) -> "QuasiInvariantTensor":
        return QuasiInvariantTensor(self.space, self.r, self.xi, {l: as_scalar(v) for l, v in c.items() if v})

    def c_tensor(self, n: int = 1) -> Tensor:
        """``Delta^n(c)``: ``c`` placed diagonally in arity ``n``."""
        eng = self.space.engine
        out = Tensor.zero(eng, n)
        for i in range(n):
            out = out + Tensor.from_letters(eng, n, i, self.c)
        return out


def r_pairs(r: Tensor) -> List[Tuple[Letter, Letter, Fraction]]:
    """``r = sum c s (x) t`` with single letters, in canonical order."""
    out = []
    for mono in sorted(r.terms):
        w1, w2 = mono
        if len(w1) != 1 or len(w2) != 1:
            raise ValueError(f"r must lie in g (x) g, found monomial {mono!r}")
        out.append((w1[0], w2[0], r.terms[mono]))
    return out


def casimir_like(engine) -> Tensor:
    """``f (x) e + e (x) f - 2 k (x) k``."""
    return Tensor(engine, 2, {((F,), (E,)): ONE, ((E,), (F,)): ONE, ((K,), (K,)): Fraction(-2)})


# ---------------------------------------------------------------------------
# the String tensor


def xi0_sl2(space: UnSpace, x: Letter) -> UnElement:
    """``xi0(X) = sum_i omega(s_i, X) (x) t_i + s_i (x) omega(t_i, X)``."""
    model: StringModel = space.model
    acc: Terms = {}
    for s, t, c in r_pairs(casimir_like(space.engine)):
        for u, a in model.omega(s, x).items():
            add_term(acc, ((u,), (t,)), c * a)
        for u, a in model.omega(t, x).items():
            add_term(acc, ((s,), (u,)), c * a)
    return space.element(Tensor(space.engine, 2, acc))


def xi0_form(space: UnSpace, h: Letter, shift: Fraction = ZERO) -> UnElement:
    """``xi0(h) = sum_i s_i > Q(h) (x) t_i + s_i (x) t_i > Q(h)``.

    ``shift`` adds a constant to the chosen primitive; the result must not
    depend on it.
    """
    model: StringModel = space.model
    p, coeff = model.primitive_letter(h)
    qh: Terms = {p: coeff}
    if shift:
        add_term(qh, model.unit_h(), as_scalar(shift))
    acc: Terms = {}
    for s, t, c in r_pairs(casimir_like(space.engine)):
        for u, a in model.apply_action({s: ONE}, qh).items():
            add_term(acc, ((u,), (t,)), c * a)
        for u, a in model.apply_action({t: ONE}, qh).items():
            add_term(acc, ((s,), (u,)), c * a)
    return space.element(Tensor(space.engine, 2, acc))


def c_map(space: UnSpace, x: Letter) -> UnElement:
    """``C((h, X)) = 1 (x) X + X (x) 1`` on the sl2 part, zero on F1."""
    if x[0] != 0:
        return space.zero(2)
    one = space.model.unit_h()
    return space.element(Tensor(space.engine, 2, {((one,), (x,)): ONE, ((x,), (one,)): ONE}))


XI_SIGNS = {"consistent": -1, "verbatim": 1}


def string_xi(space: UnSpace, variant: str = "consistent") -> LinearMap:
    """``xi = -xi0 + s C`` with ``s = -1`` (``"consistent"``) or ``s = +1`` (``"verbatim"``).

    Only ``s = -1`` satisfies condition (iii): ``C`` obeys
    ``C([X,Y]) - X > C(Y) + Y > C(X) = -C([X,Y])`` while ``xi0`` gives
    ``+C([X,Y])`` for the same combination, so the two must enter with the
    same sign.  The other variant is kept to exhibit the failure.
    """
    sign = XI_SIGNS[variant]

    def rule(l: Letter) -> UnElement:
        if l[0] == 0:
            return c_map(space, l).scale(sign) - xi0_sl2(space, l)
        if l[0] == 1:
            return -xi0_form(space, l)
        raise ValueError(f"xi is defined on g letters, got {l!r}")

    return LinearMap(space, 2, rule, "xi")


def string_tensor(space: UnSpace, c: Any = -2, variant: str = "consistent") -> QuasiInvariantTensor:
    """The String tensor with ``c = c * 1`` (a scalar, or a mapping of F0 letters)."""
    model = space.model
    if not isinstance(model, StringModel):
        raise TypeError("string_tensor needs the String model")
    cc = c if isinstance(c, Mapping) else {model.unit_h(): as_scalar(c)}
    r = casimir_like(space.engine)
    return QuasiInvariantTensor(space, r, string_xi(space, variant), {l: as_scalar(v) for l, v in cc.items() if v})


def trivial_tensor(space: UnSpace, r: Tensor | None = None) -> QuasiInvariantTensor:
    """``(r, 0, 0)``; quasi-invariant exactly when ``r`` is invariant and ``Lie(h)`` acts trivially."""
    r = casimir_like(space.engine) if r is None else r
    return QuasiInvariantTensor(space, r, LinearMap.zero(space, 2), {})


def tensor_from_section(space: UnSpace, section: Mapping[str, Any]) -> QuasiInvariantTensor:
    """Read ``{"r": [[a, b, c]], "xi": [[X, a, b, c]], "c": [[u, c]]}`` for a finite model."""
    model = space.model
    if not isinstance(model, FiniteCrossedModule):
        raise ModelError("tensor sections are only read for finite models")
    g, h = model.g_names, model.h_names
    eng = space.engine

    def any_letter(name: Any) -> Letter:
        if isinstance(name, str) and name in h and name not in g:
            return (H_KIND, h.index(name))
        return (0, _index(g, name, "tensor"))

    r_terms: Terms = {}
    for entry in section.get("r", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ModelError("tensor.r entries must be [a, b, coeff]")
        add_term(r_terms, (((0, _index(g, entry[0], "r")),), ((0, _index(g, entry[1], "r")),)), _rational(entry[2]))
    xi_terms: Dict[Letter, Terms] = {}
    for entry in section.get("xi", []):
        if not isinstance(entry, list) or len(entry) != 4:
            raise ModelError("tensor.xi entries must be [X, a, b, coeff]")
        x = (0, _index(g, entry[0], "xi"))
        add_term(xi_terms.setdefault(x, {}), ((any_letter(entry[1]),), (any_letter(entry[2]),)), _rational(entry[3]))
    c: Dict[Letter, Fraction] = {}
    for entry in section.get("c", []):
        if not isinstance(entry, list) or len(entry) != 2:
            raise ModelError("tensor.c entries must be [u, coeff]")
        u = (H_KIND, _index(h, entry[0], "c"))
        c[u] = c.get(u, ZERO) + _rational(entry[1])
    values = {x: space.element(Tensor(eng, 2, t)) for x, t in xi_terms.items()}
    return QuasiInvariantTensor(space, Tensor(eng, 2, r_terms), LinearMap.table(space, 2, values), c)


def default_tensor(space: UnSpace, section: Mapping[str, Any] | None = None, c: Any = -2) -> QuasiInvariantTensor:
    if isinstance(space.model, StringModel):
        return string_tensor(space, c)
    if section:
        return tensor_from_section(space, section)
    return trivial_tensor(space)


# ---------------------------------------------------------------------------
# validation


def validate_tensor(q: QuasiInvariantTensor, degree_bound: int = 6, mode: str = "rewrite") -> Dict[str, List[str]]:
    """Named witnesses for every failed condition (empty lists mean pass)."""
    space, model = q.space, q.model
    name = model.letter_name
    g = model.g_basis(degree_bound)
    h = model.h_basis(degree_bound)
    bad: Dict[str, List[str]] = {k: [] for k in ("symmetry", "image_symmetry", "c_closed", "c_invariant", "i", "ii", "iii")}
    if q.r != q.r.flip():
        diff = q.r - q.r.flip()
        bad["symmetry"].append(diff.format())
    if any(model.apply_partial(q.c).values()):
        bad["c_closed"].append(model.format_terms(model.apply_partial(q.c)))
    for x in g:
        if model.apply_action({x: ONE}, q.c):
            bad["c_invariant"].append(name(x))
    for x in g:
        v = q.xi(x)
        if not space.equal(v, v.permute((1, 0)), mode):
            bad["image_symmetry"].append(name(x))
        if g_act({x: ONE}, q.r) != v.beta():
            bad["i"].append(name(x))
    for u in h:
        if not space.equal(h_act(space, {u: ONE}, q.r), q.xi.apply(model.partial(u)), mode):
            bad["ii"].append(name(u))
    for i, x in enumerate(g):
        for y in g[i + 1:]:
            lhs = q.xi.apply(model.g_bracket(x, y))
            rhs = q.xi(y).g_act({x: ONE}) - q.xi(x).g_act({y: ONE})
            if not space.equal(lhs, rhs, mode):
                bad["iii"].append(f"[{name(x)},{name(y)}]")
    return bad


def invariance_defect(model: CrossedModuleModel, engine, r: Tensor, x: Letter) -> Tensor:
    """``sum_i [s_i, X] (x) t_i + s_i (x) [t_i, X]``, which is ``-(X > r)``."""
    return -g_act({x: ONE}, r)


# ---------------------------------------------------------------------------
# coherence


CYCLE_231 = perm_from_cycles(3, (1, 2, 3))
CYCLE_312 = perm_from_cycles(3, (1, 3, 2))


def cyclic_sum(p: UnElement) -> UnElement:
    return p + p.permute(CYCLE_231) + p.permute(CYCLE_312)


def s_xi_term(q: QuasiInvariantTensor) -> UnElement:
    """``sum_i s_i (x) xi(t_i)`` in ``U^(3)``."""
    eng = q.space.engine
    out = q.space.zero(3)
    for s, t, c in q.pairs():
        out = out + q.xi(t).tensor_left(Tensor(eng, 1, {((s,),): c}))
    return out


def c_r_term(q: QuasiInvariantTensor) -> UnElement:
    """``c (x) r`` in ``U^(3)``."""
    return q.space.element(Tensor.from_letters(q.space.engine, 1, 0, q.c).tensor(q.r))


def coherence_p(q: QuasiInvariantTensor, form: str = "braiding") -> UnElement:
    """The element whose cyclic sum measures coherence.

    ``form="braiding"`` is the arrow part of ``P = T_(1, r_11)`` read off the
    braiding construction, ``-sum_i s_i (x) xi(t_i) + c (x) r``.
    ``form="sum"`` is ``sum_i s_i (x) xi(t_i) + c (x) r``.  With the
    consistent ``xi`` only the first vanishes cyclically at ``c = -2``; the
    ``xi0`` contributions cancel cyclically in both, so the braiding form
    has the same cyclic sum as the sum form taken with the verbatim ``xi``.
    """
    if form == "braiding":
        return c_r_term(q) - s_xi_term(q)
    if form == "sum":
        return s_xi_term(q) + c_r_term(q)
    raise ValueError(f"unknown coherence form {form!r}")


def coherence_defect(q: QuasiInvariantTensor, form: str = "braiding") -> UnElement:
    """``P_123 + P_231 + P_312`` in ``U^(3)``."""
    return cyclic_sum(coherence_p(q, form))


def solve_unit_multiple(defect: Callable[[Fraction], UnElement]) -> Optional[Fraction]:
    """The unique ``lam`` with ``defect(lam) == 0`` for an affine ``defect``, if any."""
    d0 = defect(ZERO)
    slope = defect(ONE) - d0
    if slope.is_zero():
        return ZERO if d0.is_zero() else None
    mono = min(slope.tensor.terms)
    lam = -d0.tensor.terms.get(mono, ZERO) / slope.tensor.terms[mono]
    return lam if defect(lam).is_zero() else None


def convention_diagnostic(q: QuasiInvariantTensor) -> Dict[str, Optional[Fraction]]:
    """Which multiple of ``1`` makes each P-formula cyclically vanish.

    ``"cohP"`` uses ``sum s (x) xi(t) + c (x) r``; ``"defTr"`` uses the
    arrow part read off the braiding formula, ``-sum s (x) xi(t) + c (x) r``.
    ``None`` means no multiple works.
    """
    unit = q.model.unit_h() if isinstance(q.model, StringModel) else None
    if unit is None:
        return {"cohP": None, "defTr": None}
    sx = cyclic_sum(s_xi_term(q))

    def cr(lam: Fraction) -> UnElement:
        return cyclic_sum(c_r_term(q.with_c({unit: lam})))

    return {
        "cohP": solve_unit_multiple(lambda lam: sx + cr(lam)),
        "defTr": solve_unit_multiple(lambda lam: -sx + cr(lam)),
    }


# ---------------------------------------------------------------------------
# the Phi pairing


def phi_pairing_check(model: StringModel, engine) -> Dict[str, List[str]]:
    """``sum Phi(s_i,X,Y) (x) t_i = 1 (x) [X,Y]`` and its mirror, for all sl2 pairs."""
    r = casimir_like(engine)
    one = model.unit_h()
    bad: Dict[str, List[str]] = {"left": [], "right": []}
    for x in model.sl2_basis():
        for y in model.sl2_basis():
            left: Terms = {}
            right: Terms = {}
            for s, t, c in r_pairs(r):
                for u, a in model.phi(s, x, y).items():
                    add_term(left, ((u,), (t,)), c * a)
                for u, a in model.phi(t, x, y).items():
                    add_term(right, ((s,), (u,)), c * a)
            brk = model._sl2_bracket(x, y)
            want_l = Tensor(engine, 2, {((one,), (l,)): a for l, a in brk.items()})
            want_r = Tensor(engine, 2, {((l,), (one,)): a for l, a in brk.items()})
            if Tensor(engine, 2, left) != want_l:
                bad["left"].append(f"({model.letter_name(x)},{model.letter_name(y)})")
            if Tensor(engine, 2, right) != want_r:
                bad["right"].append(f"({model.letter_name(x)},{model.letter_name(y)})")
    return bad


def phi_pairing_value(model: StringModel, engine, x: Letter, y: Letter) -> Tensor:
    acc: Terms = {}
    for s, t, c in r_pairs(casimir_like(engine)):
        for u, a in model.phi(s, x, y).items():
            add_term(acc, ((u,), (t,)), c * a)
    return Tensor(engine, 2, acc)
