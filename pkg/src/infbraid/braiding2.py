"""The strict infinitesimal 2-braiding built from a quasi-invariant tensor.

``r_{n,m}`` sums ``r`` and ``xi`` over all pairs of slots split by the
block boundary and carries the decoration ``(id, 1)``.  For a 1-morphism
``f = (R, zeta, sigma, k)`` on ``n``::

    T_(f,m) = -sum_q zeta(s_q) (x) D^m(t_q) + k R (x) D^m(c)
    T_(m,f) = -sum_q D^m(s_q) (x) zeta(t_q) + k D^m(c) (x) R

``P = T_(1, r_11)`` and ``Q = T_(r_11, 1)`` measure the failure of the
4-term relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .algebra_core import ONE, DecoratedPermutation, Perm, perm_identity
from .crossed_modules import Letter
from .enveloping import Tensor, diagonal
from .quasi_invariant import QuasiInvariantTensor
from .relative_tensor import UnElement, UnSpace
from .two_category import (
    LinearMap,
    OneMorphism,
    TwoMorphism,
    braiding,
    compose_one,
    identity,
    object_tensor,
    one_morphism_defect,
    tensor_one,
    tensor_two,
    whisker_left,
    whisker_right,
)


def insert_perm(sigma: Perm, positions: Sequence[int], n: int) -> Perm:
    """Extend ``sigma`` on ``len(positions)`` points to ``n`` points, fixing the rest."""
    out = list(range(n))
    for i, p in enumerate(positions):
        out[p] = positions[sigma[i]]
    return tuple(out)


def insert_one(m: OneMorphism, positions: Sequence[int], n: int) -> OneMorphism:
    """``m`` acting on the slots ``positions`` of ``n`` (0-based)."""
    pos = tuple(positions)
    eng = m.space.engine
    tau = DecoratedPermutation(insert_perm(m.sigma, pos, n), m.k)
    return OneMorphism(n, m.R.insert(pos, n), m.zeta.insert(pos, n), tau, m.space)


def upper(positions: str | Sequence[int]) -> Tuple[int, ...]:
    """``"134"`` or ``(1, 3, 4)`` (1-based superscripts) to 0-based positions."""
    if isinstance(positions, str):
        return tuple(int(ch) - 1 for ch in positions)
    return tuple(p - 1 for p in positions)


class Braiding2:
    def __init__(self, q: QuasiInvariantTensor):
        self.q = q
        self.space: UnSpace = q.space
        self.engine = q.space.engine
        self._r: Dict[Tuple[int, int], OneMorphism] = {}

    # ------------------------------------------------------------------ r
    def r(self, n: int, m: int) -> OneMorphism:
        key = (n, m)
        hit = self._r.get(key)
        if hit is not None:
            return hit
        N = n + m
        eng, space = self.engine, self.space
        R = Tensor.zero(eng, N)
        pairs = [(i, j) for i in range(n) for j in range(n, N)]
        for i, j in pairs:
            R = R + self.q.r.insert((i, j), N)
        xi = self.q.xi

        def rule(l: Letter) -> UnElement:
            v = xi(l)
            out = space.zero(N)
            for i, j in pairs:
                out = out + v.insert((i, j), N)
            return out

        hit = OneMorphism(N, R, LinearMap(space, N, rule, f"xi_{n},{m}"), DecoratedPermutation.identity(N, 1), space)
        self._r[key] = hit
        return hit

    def r_at(self, n: int, a: int, b: int) -> OneMorphism:
        """``r^{ab}`` on ``n`` single slots (1-based ``a``, ``b``)."""
        return insert_one(self.r(1, 1), (a - 1, b - 1), n)

    # ------------------------------------------------------------------ T
    def T_left(self, f: OneMorphism, m: int) -> TwoMorphism:
        """``T_(f,m)``, a 2-morphism out of ``r_{n,m} (f (x) m)``."""
        eng = self.engine
        el = self.space.zero(f.n + m)
        for s, t, c in self.q.pairs():
            el = el - f.zeta(s).tensor_right(diagonal(eng, {t: c}, m))
        if f.k and self.q.c:
            el = el + self.space.element(f.R.tensor(self.q.c_tensor(m)).scale(f.k))
        src = compose_one(self.r(f.n, m), object_tensor(self.space, f, right=m))
        return TwoMorphism(src, el)

    def T_right(self, m: int, f: OneMorphism) -> TwoMorphism:
        """``T_(m,f)``, a 2-morphism out of ``r_{m,n} (m (x) f)``."""
        eng = self.engine
        el = self.space.zero(f.n + m)
        for s, t, c in self.q.pairs():
            el = el - f.zeta(t).tensor_left(diagonal(eng, {s: c}, m))
        if f.k and self.q.c:
            el = el + self.space.element(self.q.c_tensor(m).tensor(f.R).scale(f.k))
        src = compose_one(self.r(m, f.n), object_tensor(self.space, f, left=m))
        return TwoMorphism(src, el)

    def T_both(self, f: OneMorphism, g: OneMorphism, order: str = "first") -> TwoMorphism:
        """``T_(f,g)`` as either side of the interchange law.

        ``"first"``: ``T_(f,y)(x' (x) g) ; (f (x) y) T_(x',g)``;
        ``"second"``: ``T_(x,g)(f (x) y') ; (x (x) g) T_(f,y')``.
        """
        sp = self.space
        n, m = f.n, g.n
        f_y = object_tensor(sp, f, right=m)
        x_g = object_tensor(sp, g, left=n)
        if order == "first":
            a = whisker_right(self.T_left(f, m), x_g)
            b = whisker_left(f_y, self.T_right(n, g))
        elif order == "second":
            a = whisker_right(self.T_right(n, g), f_y)
            b = whisker_left(x_g, self.T_left(f, m))
        else:
            raise ValueError(order)
        return TwoMorphism(a.source, a.T + b.T)

    def expected_target_left(self, f: OneMorphism, m: int) -> OneMorphism:
        return compose_one(object_tensor(self.space, f, right=m), self.r(f.n, m))

    def expected_target_right(self, m: int, f: OneMorphism) -> OneMorphism:
        return compose_one(object_tensor(self.space, f, left=m), self.r(m, f.n))

    # ------------------------------------------------------------------ P, Q
    def P(self) -> TwoMorphism:
        return self.T_right(1, self.r(1, 1))

    def Q(self) -> TwoMorphism:
        return self.T_left(self.r(1, 1), 1)

    def pq(self, arity: int = 3) -> "PQData":
        return PQData(self, arity, self.P().T, self.Q().T)


def build_braiding(q: QuasiInvariantTensor, check: bool = True, degree_bound: int = 3) -> Braiding2:
    """The braiding of ``q``; with ``check`` the tensor is validated first."""
    if check:
        from .quasi_invariant import validate_tensor

        bad = {k: v for k, v in validate_tensor(q, degree_bound).items() if v}
        if bad:
            raise ValueError(f"not a quasi-invariant tensor: {bad}")
    return Braiding2(q)


# ---------------------------------------------------------------------------
# P/Q data and the categorified 4-term relations


@dataclass
class PQData:
    braiding: Braiding2
    arity: int
    P: UnElement
    Q: UnElement
    _cache: Dict[Tuple[str, Tuple[int, ...]], UnElement] = field(default_factory=dict, repr=False)

    @property
    def space(self) -> UnSpace:
        return self.braiding.space

    def at(self, which: str, sup: str | Sequence[int], n: int | None = None) -> UnElement:
        n = self.arity if n is None else n
        pos = upper(sup)
        key = (which + str(n), pos)
        hit = self._cache.get(key)
        if hit is None:
            base = {"P": self.P, "Q": self.Q}[which]
            hit = base.insert(pos, n)
            self._cache[key] = hit
        return hit

    def P_at(self, sup, n: int | None = None) -> UnElement:
        return self.at("P", sup, n)

    def Q_at(self, sup, n: int | None = None) -> UnElement:
        return self.at("Q", sup, n)

    def r_at(self, sup, n: int | None = None) -> Tensor:
        n = self.arity if n is None else n
        return self.braiding.q.r.insert(upper(sup), n)

    def act(self, r_sups: Sequence[str], x: UnElement) -> UnElement:
        """``(sum r^{ab}) > x = R x - x R``."""
        R = Tensor.zero(self.braiding.engine, x.arity)
        for s in r_sups:
            R = R + self.r_at(s, x.arity)
        return R * x - x * R


def categorified_four_term(pq: PQData, reading: str = "consistent") -> Dict[str, UnElement]:
    """The six relations as exact defects in ``U^(4)``.

    ``reading`` picks between the index-consistent and the literal form of
    the second term of the first relation; with single-slot objects both
    name the insertions ``r^12 + r^13``, so the values agree.
    """
    if pq.arity != 4:
        raise ValueError("the categorified 4-term relations live in arity 4")
    P, Q, act = pq.P_at, pq.Q_at, pq.act
    second = {"consistent": ("12", "13"), "verbatim": ("12", "13")}[reading]
    out = {
        "nat1": act(("14", "24", "34"), P("123")) - act(second, Q("234")) + act(("23",), Q("124") + Q("134")),
        "nat2": act(("12", "13", "14"), P("234")) + act(("34",), P("123") + P("124")) - act(("23", "24"), P("134")),
        "nat3": act(("14", "24", "34"), Q("123")) + act(("12",), Q("134") + Q("234")) - act(("13", "23"), Q("124")),
        "nat4": act(("12", "13", "14"), Q("234")) + act(("23",), P("124") + P("134")) - act(("24", "34"), P("123")),
        "nat5": act(("12",), P("134") + P("234")) - act(("34",), Q("123") + Q("124")),
        "nat6": act(("13",), P("124") - P("234") - Q("234")) + act(("24",), Q("123") + P("123") - Q("134")),
    }
    return out


def perturbed(pq: PQData, delta: UnElement) -> PQData:
    """A copy with ``P`` replaced by ``P + delta`` (for negative controls)."""
    return PQData(pq.braiding, pq.arity, pq.P + delta, pq.Q)


def jacobi_defect(pq: PQData) -> UnElement:
    """``P^123 + P^312 + P^231`` in ``U^(3)``."""
    return pq.P_at("123", 3) + pq.P_at("312", 3) + pq.P_at("231", 3)


def coherence_defects(pq: PQData) -> Dict[str, UnElement]:
    """``P^213 = -(P + Q) = Q^132`` as two defects."""
    P, Q = pq.P_at("123", 3), pq.Q_at("123", 3)
    mid = -(P + Q)
    return {"P213": pq.P_at("213", 3) - mid, "Q132": pq.Q_at("132", 3) - mid}


def symm_pq_defects(pq: PQData) -> Dict[str, UnElement]:
    P, Q = pq.P_at("123", 3), pq.Q_at("123", 3)
    return {
        "P=P132": P - pq.P_at("132", 3),
        "P=Q321": P - pq.Q_at("321", 3),
        "Q=Q213": Q - pq.Q_at("213", 3),
    }


def pq_arrow_parts(b: Braiding2, arity: int = 3) -> PQData:
    return b.pq(arity)


# ---------------------------------------------------------------------------
# axiom checks


def _count(x) -> int:
    if isinstance(x, UnElement):
        return 0 if x.is_zero() else len(x.space.canonical(x.tensor))
    if isinstance(x, list):
        return len(x)
    raise TypeError(type(x))


@dataclass
class AxiomReport:
    defects: Dict[str, List[Tuple[str, int]]] = field(default_factory=dict)

    def add(self, axiom: str, case: str, count: int) -> None:
        self.defects.setdefault(axiom, []).append((case, count))

    def failures(self) -> Dict[str, List[Tuple[str, int]]]:
        return {a: [c for c in cs if c[1]] for a, cs in self.defects.items() if any(c[1] for c in cs)}

    def term_count(self, axiom: str | None = None) -> int:
        items = self.defects.items() if axiom is None else [(axiom, self.defects.get(axiom, []))]
        return sum(c for _a, cs in items for _case, c in cs)

    def ok(self) -> bool:
        return self.term_count() == 0


def _one_defect_count(a: OneMorphism, b: OneMorphism, D: int) -> int:
    return len(one_morphism_defect(a, b, D))


def check_axioms(
    b: Braiding2,
    morphisms: Mapping[str, OneMorphism],
    two_morphisms: Mapping[str, TwoMorphism],
    objects: Sequence[int] = (1, 2),
    degree_bound: int = 3,
    max_arity: int = 4,
) -> AxiomReport:
    """Evaluate the 2-braiding axioms on the given 1- and 2-morphisms.

    ``morphisms`` are valid 1-morphisms (keyed by a label); each is paired
    with every object ``y`` so that the total arity stays within
    ``max_arity``.  ``two_morphisms`` are 2-morphisms used for naturality.
    """
    sp = b.space
    rep = AxiomReport()
    D = degree_bound
    # r linearity
    for n in objects:
        for y in objects:
            for z in objects:
                if n + y + z > max_arity:
                    continue
                N = n + y + z
                lhs = b.r(n, y + z)
                rhs_R = insert_one(b.r(n, y), list(range(n + y)), N) + insert_one(
                    b.r(n, z), list(range(n)) + list(range(n + y, N)), N)
                rep.add("rlin", f"r_{n},{y}+{z}", _one_defect_count(lhs, rhs_R, D))
                lhs = b.r(n + y, z)
                rhs = insert_one(b.r(n, z), list(range(n)) + list(range(n + y, N)), N) + insert_one(
                    b.r(y, z), list(range(n, N)), N)
                rep.add("rlin", f"r_{n}+{y},{z}", _one_defect_count(lhs, rhs, D))
    # shape of T, naturality-free axioms
    items = list(morphisms.items())
    for label, f in items:
        for m in objects:
            if f.n + m > max_arity:
                continue
            TL = b.T_left(f, m)
            rep.add("T_target", f"T_({label},{m})", _one_defect_count(TL.target(), b.expected_target_left(f, m), D))
            TR = b.T_right(m, f)
            rep.add("T_target", f"T_({m},{label})", _one_defect_count(TR.target(), b.expected_target_right(m, f), D))
    # linearity and composition
    for (l1, f), (l2, g) in _pairs(items):
        if f.n != g.n:
            continue
        for m in objects:
            if f.n + m > max_arity:
                continue
            if f.tau == g.tau:
                s = f + g
                rep.add("linT", f"({l1}+{l2},{m})", _count(b.T_left(s, m).T - b.T_left(f, m).T - b.T_left(g, m).T))
                rep.add("linT", f"({m},{l1}+{l2})", _count(b.T_right(m, s).T - b.T_right(m, f).T - b.T_right(m, g).T))
            fg = compose_one(f, g)
            tl = b.T_left(f, m)
            lhs = b.T_left(fg, m).T
            rhs = whisker_right(tl, object_tensor(sp, g, right=m)).T + whisker_left(
                object_tensor(sp, f, right=m), b.T_left(g, m)).T
            rep.add("compT", f"({l1}{l2},{m})", _count(lhs - rhs))
            lhs = b.T_right(m, fg).T
            rhs = whisker_right(b.T_right(m, f), object_tensor(sp, g, left=m)).T + whisker_left(
                object_tensor(sp, f, left=m), b.T_right(m, g)).T
            rep.add("compT", f"({m},{l1}{l2})", _count(lhs - rhs))
    # naturality with respect to 2-morphisms S: f => g
    for label, S in two_morphisms.items():
        f, g = S.source, S.target()
        for m in objects:
            if f.n + m > max_arity:
                continue
            Sm = tensor_two(S, TwoMorphism(identity(sp, m), sp.zero(m)))
            lhs = b.T_left(f, m).T + whisker_right(Sm, b.r(f.n, m)).T
            rhs = whisker_left(b.r(f.n, m), Sm).T + b.T_left(g, m).T
            rep.add("natT", f"({label},{m})", _count(lhs - rhs))
            mS = tensor_two(TwoMorphism(identity(sp, m), sp.zero(m)), S)
            # mirror of left naturality: with f and g exchanged the composite would not type-check
            lhs = whisker_left(b.r(m, f.n), mS).T + b.T_right(m, g).T
            rhs = b.T_right(m, f).T + whisker_right(mS, b.r(m, f.n)).T
            rep.add("natTr", f"({m},{label})", _count(lhs - rhs))
    # interchange
    for (l1, f), (l2, g) in _all_pairs(items):
        if f.n + g.n > max_arity:
            continue
        d = b.T_both(f, g, "first").T - b.T_both(f, g, "second").T
        rep.add("Tfg", f"({l1},{l2})", _count(d))
    # object linearity
    for label, f in items:
        n = f.n
        for y in objects:
            for z in objects:
                N = n + y + z
                if N > max_arity:
                    continue
                xy = list(range(n + y))
                xz = list(range(n)) + list(range(n + y, N))
                lhs = b.T_left(f, y + z).T
                rhs = b.T_left(f, y).T.insert(xy, N) + b.T_left(f, z).T.insert(xz, N)
                rep.add("Tlinob", f"({label},{y}+{z})", _count(lhs - rhs))
                # T_(y (x) z, f) = T^13_(y,f) + T^23_(z,f)
                yf = list(range(y)) + list(range(y + z, N))
                zf = list(range(y, N))
                lhs = b.T_right(y + z, f).T
                rhs = b.T_right(y, f).T.insert(yf, N) + b.T_right(z, f).T.insert(zf, N)
                rep.add("Tlinob", f"({y}+{z},{label})", _count(lhs - rhs))
                # T_(f (x) y, z) = T^13_(f,z), T_(y (x) f, z) = T^23_(f,z)
                lhs = b.T_left(object_tensor(sp, f, right=y), z).T
                rep.add("Tlinmor", f"({label}x{y},{z})", _count(lhs - b.T_left(f, z).T.insert(xz, N)))
                lhs = b.T_left(object_tensor(sp, f, left=y), z).T
                rep.add("Tlinmor", f"({y}x{label},{z})", _count(lhs - b.T_left(f, z).T.insert(list(range(y, N)), N)))
    return rep


def check_totally_symmetric(
    b: Braiding2,
    morphisms: Mapping[str, OneMorphism],
    objects: Sequence[int] = (1, 2),
    degree_bound: int = 3,
    max_arity: int = 4,
) -> AxiomReport:
    sp = b.space
    rep = AxiomReport()
    D = degree_bound
    for x in objects:
        for y in objects:
            if x + y > max_arity:
                continue
            lhs = b.r(x, y)
            rhs = compose_one(compose_one(braiding(sp, x, y), b.r(y, x)), braiding(sp, y, x))
            rep.add("rsymm", f"r_{x},{y}", _one_defect_count(lhs, rhs, D))
    for x in objects:
        for y in objects:
            for z in objects:
                if x + y + z > max_arity:
                    continue
                xB = object_tensor(sp, braiding(sp, y, z), left=x)
                lhs = compose_one(b.r(x, y + z), xB)
                rhs = compose_one(xB, b.r(x, z + y))
                rep.add("tid", f"({x},{y},{z})", _one_defect_count(lhs, rhs, D))
                rep.add("Tid", f"T_({x},B_{y},{z})", _count(b.T_right(x, braiding(sp, y, z)).T))
                Bz = object_tensor(sp, braiding(sp, x, y), right=z)
                lhs = compose_one(b.r(x + y, z), Bz)
                rhs = compose_one(Bz, b.r(y + x, z))
                rep.add("tid", f"({x},{y}|{z})", _one_defect_count(lhs, rhs, D))
                rep.add("Tid", f"T_(B_{x},{y},{z})", _count(b.T_left(braiding(sp, x, y), z).T))
    items = list(morphisms.items())
    # T_(f,g) = B T_(g,f) B
    for (l1, f), (l2, g) in _all_pairs(items):
        if f.n + g.n > max_arity:
            continue
        Tfg = b.T_both(f, g)
        Tgf = b.T_both(g, f)
        conj = whisker_right(whisker_left(braiding(sp, f.n, g.n), Tgf), braiding(sp, g.n, f.n))
        rep.add("TsymmB", f"({l1},{l2})", _count(Tfg.T - conj.T))
    # B^23 T_(x, z (x) g) B^23 = T_(x, g (x) z)
    for label, g in items:
        for x in objects:
            for z in objects:
                N = x + z + g.n
                if N > max_arity:
                    continue
                B1 = object_tensor(sp, braiding(sp, g.n, z), left=x)
                B2 = object_tensor(sp, braiding(sp, z, g.n), left=x)
                inner = b.T_right(x, object_tensor(sp, g, left=z))
                lhs = whisker_right(whisker_left(B1, inner), B2)
                rhs = b.T_right(x, object_tensor(sp, g, right=z))
                rep.add("TBcomp", f"({x},{label}x{z})", _count(lhs.T - rhs.T))
    pq = b.pq(3)
    for k, v in symm_pq_defects(pq).items():
        rep.add("symmPQ", k, _count(v))
    return rep


def _pairs(items):
    for i, a in enumerate(items):
        for bb in items[i:]:
            yield a, bb


def _all_pairs(items):
    for a in items:
        for bb in items:
            yield a, bb
