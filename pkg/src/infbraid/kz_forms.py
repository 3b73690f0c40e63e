"""Configuration-space forms modulo Arnold relations and the KZ 2-connection.

Forms are abstract: ``w_ab = w_ba`` are closed, anticommuting generators
subject to ``w_ij w_jk + w_jk w_ki + w_ki w_ij = 0``.  The normal form is
the broken-circuit basis: generators sorted by (second index, first index)
with strictly increasing second indices.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra_core import ONE, ZERO, LinComb, Perm, Terms, add_term, perm_inverse
from .enveloping import Tensor
from .relative_tensor import UnElement

Gen = Tuple[int, int]
FormMono = Tuple[Gen, ...]


def gen(a: int, b: int) -> Gen:
    if a == b:
        raise ValueError("w_aa is not a generator")
    return (a, b) if a < b else (b, a)


def _sort_key(g: Gen) -> Tuple[int, int]:
    return (g[1], g[0])


def _sort_with_sign(mono: Sequence[Gen]) -> Tuple[FormMono | None, int]:
    items = list(mono)
    if len(set(items)) != len(items):
        return None, 0
    sign = 1
    # bubble sort keeps track of the permutation sign
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if _sort_key(items[j]) > _sort_key(items[j + 1]):
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return tuple(items), sign


@lru_cache(maxsize=None)
def _normal_mono(mono: FormMono) -> Tuple[Tuple[FormMono, Fraction], ...]:
    srt, sign = _sort_with_sign(mono)
    if srt is None:
        return ()
    for i in range(len(srt) - 1):
        (a, j), (b, j2) = srt[i], srt[i + 1]
        if j == j2:
            # w_aj w_bj = w_ab w_bj - w_ab w_aj  (a < b < j)
            head, tail = srt[:i], srt[i + 2:]
            acc: Terms = {}
            for new, c in ((((a, b), (b, j)), ONE), (((a, b), (a, j)), -ONE)):
                for m, v in _normal_mono(head + new + tail):
                    add_term(acc, m, c * v * sign)
            return tuple(sorted(acc.items()))
    return ((srt, Fraction(sign)),)


def normal_mono(mono: Sequence[Gen]) -> Dict[FormMono, Fraction]:
    return dict(_normal_mono(tuple(gen(*g) for g in mono)))


def wedge_normalize(e: Mapping[Sequence[Gen], Any]) -> Dict[FormMono, Fraction]:
    """Scalar form element to normal form (linear, idempotent)."""
    acc: Terms = {}
    for mono, c in e.items():
        for m, v in _normal_mono(tuple(gen(*g) for g in mono)):
            add_term(acc, m, v * Fraction(c))
    return acc


def is_normal(mono: FormMono) -> bool:
    seconds = [g[1] for g in mono]
    return all(g[0] < g[1] for g in mono) and all(x < y for x, y in zip(seconds, seconds[1:]))


def normal_basis(n: int, degree: int) -> List[FormMono]:
    """Broken-circuit monomials: one generator ``w_ij`` (``i < j``) per chosen ``j``."""
    out: List[FormMono] = []
    for js in combinations(range(2, n + 1), degree):
        def rec(k: int, acc: Tuple[Gen, ...]):
            if k == len(js):
                out.append(acc)
                return
            for i in range(1, js[k]):
                rec(k + 1, acc + ((i, js[k]),))
        rec(0, ())
    return sorted(out)


def quadruple_basis(a: int, b: int, c: int, d: int) -> List[FormMono]:
    """``[ab][ac][ad], [ab][bc][ad], [ab][ac][bd], [ab][bc][bd], [ab][ac][cd], [ab][bc][cd]``."""
    return [
        ((a, b), (a, c), (a, d)),
        ((a, b), (b, c), (a, d)),
        ((a, b), (a, c), (b, d)),
        ((a, b), (b, c), (b, d)),
        ((a, b), (a, c), (c, d)),
        ((a, b), (b, c), (c, d)),
    ]


# ---------------------------------------------------------------------------
# forms with coefficients


def _scale(v: Any, c: Fraction) -> Any:
    if hasattr(v, "scale"):
        return v.scale(c)
    return v * c


def _is_zero(v: Any) -> bool:
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return not v


def normalize_coeff_form(e: Mapping[FormMono, Any]) -> Dict[FormMono, Any]:
    """Normal form of a form whose coefficients are module elements."""
    acc: Dict[FormMono, Any] = {}
    for mono in sorted(e):
        val = e[mono]
        for m, s in _normal_mono(tuple(gen(*g) for g in mono)):
            term = _scale(val, s)
            acc[m] = acc[m] + term if m in acc else term
    return {m: v for m, v in acc.items() if not _is_zero(v)}


def wedge_coeff(
    left: Mapping[FormMono, Any], right: Mapping[FormMono, Any], mul: Callable[[Any, Any], Any]
) -> Dict[FormMono, Any]:
    """``(sum a_m m) ^ (sum b_p p) = sum (m ^ p) mul(a_m, b_p)`` before normalization."""
    out: Dict[FormMono, Any] = {}
    for m1, a in left.items():
        for m2, b in right.items():
            key = m1 + m2
            v = mul(a, b)
            out[key] = out[key] + v if key in out else v
    return out


# ---------------------------------------------------------------------------
# the 2-connection


def triples(n: int) -> List[Tuple[int, int, int]]:
    return list(combinations(range(1, n + 1), 3))


def pairs(n: int) -> List[Tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


@dataclass
class Connection2:
    """``A = sum w_ab r^ab`` and ``B = 2 sum [bc][ca] P^abc - 2 sum [ca][ab] Q^abc``.

    ``A`` maps degree-1 monomials to ``R`` tensors (the 1-morphism parts of
    ``r^ab``, which all carry the same decoration); ``B`` maps degree-2
    monomials (as written, before normalization) to ``U^(n)`` elements.
    """

    n: int
    A: Dict[FormMono, Tensor]
    B: Dict[FormMono, Any]

    def B_normal(self) -> Dict[FormMono, Any]:
        return normalize_coeff_form(self.B)


def build_connection(pq, n: int) -> Connection2:
    """Connection from ``PQData`` (any arity; insertions are done at ``n``)."""
    if n < 2:
        raise ValueError("the KZ connection needs n >= 2")
    A = {((a, b),): pq.r_at((a, b), n) for a, b in pairs(n)}
    B: Dict[FormMono, Any] = {}
    for a, b, c in triples(n):
        B[(gen(b, c), gen(c, a))] = pq.P_at((a, b, c), n).scale(2)
        B[(gen(c, a), gen(a, b))] = pq.Q_at((a, b, c), n).scale(-2)
    return Connection2(n, A, B)


def curvature(conn: Connection2) -> Dict[FormMono, Tensor]:
    """``F_A = [A ^ A] = sum_(p,q) w_p w_q [r_p, r_q]``, that is ``2 A ^ A``."""
    raw = wedge_coeff(conn.A, conn.A, lambda x, y: (x * y).scale(2))
    return normalize_coeff_form(raw)


def fake_curvature_defect(conn: Connection2) -> Dict[FormMono, Tensor]:
    """``beta(B) - F_A`` on normal-form 2-forms; empty means fake flat."""
    beta_B = {m: v.beta() for m, v in conn.B.items()}
    diff: Dict[FormMono, Tensor] = dict(normalize_coeff_form(beta_B))
    for m, v in curvature(conn).items():
        diff[m] = diff[m] - v if m in diff else -v
    return {m: v for m, v in diff.items() if not v.is_zero()}


def fake_curvature_zeta_defect(conn: Connection2, pq, letters) -> Dict[Tuple[FormMono, Any], UnElement]:
    """The ``zeta`` components of ``beta(B) - F_A`` evaluated on ``letters``.

    ``beta(T)`` has ``zeta = X -> X > T``; the curvature's ``zeta`` is that of
    the composites ``r^p r^q``.
    """
    b = pq.braiding
    from .braiding2 import insert_one
    from .two_category import compose_one

    n = conn.n
    rs = {p: insert_one(b.r(1, 1), (p[0] - 1, p[1] - 1), n) for p in pairs(n)}
    out: Dict[Tuple[FormMono, Any], UnElement] = {}
    for x in letters:
        lhs = normalize_coeff_form({m: v.g_act({x: ONE}) for m, v in conn.B.items()})
        raw: Dict[FormMono, UnElement] = {}
        for p in pairs(n):
            for q in pairs(n):
                if p == q:
                    continue
                v = compose_one(rs[p], rs[q]).zeta(x).scale(2)
                key = ((p, q))
                raw[key] = raw[key] + v if key in raw else v
        rhs = normalize_coeff_form(raw)
        for m in set(lhs) | set(rhs):
            z = pq.space.zero(n)
            d = lhs.get(m, z) - rhs.get(m, z)
            if not d.is_zero():
                out[(m, x)] = d
    return out


def act_r(R: Tensor, x: UnElement) -> UnElement:
    return R * x - x * R


def two_curvature(conn: Connection2) -> Dict[FormMono, UnElement]:
    """``G = dB + A ^ B = A ^ B`` on normal-form 3-forms (nonzero entries only)."""
    raw = wedge_coeff(conn.A, conn.B, act_r)
    return normalize_coeff_form(raw)


# ---------------------------------------------------------------------------
# symbolic W/Z bookkeeping


def sym(kind: str, pair: Tuple[int, int], trip: Tuple[int, int, int]) -> Tuple[str, Tuple[int, int], Tuple[int, int, int]]:
    """``W_{ab,cde}`` or ``Z_{ab,cde}`` with ``r^ab = r^ba`` folded in."""
    return (kind, tuple(sorted(pair)), tuple(trip))


def symbolic_two_curvature(n: int) -> Dict[FormMono, LinComb]:
    """``A ^ B`` with ``r^ab > P^cde = W`` and ``r^ab > Q^cde = -Z``, divided by the factor 2 of ``B``.

    Terms with disjoint index sets are dropped (they vanish identically).
    """
    raw: Dict[FormMono, LinComb] = {}
    for p in pairs(n):
        for a, b, c in triples(n):
            if not set(p) & {a, b, c}:
                continue
            for form, kind in (((gen(b, c), gen(c, a)), "W"), ((gen(c, a), gen(a, b)), "Z")):
                # +2 P and -2 Q both become +2 times the symbol, halved here
                key = (p,) + form
                v = LinComb({sym(kind, p, (a, b, c)): 1})
                raw[key] = raw[key] + v if key in raw else v
    return normalize_coeff_form(raw)


def display_terms(a: int, b: int, c: int, d: int) -> List[Tuple[FormMono, Tuple]]:
    """The 24 W/Z terms of the 2-curvature expansion, in a fixed order (the order of ``V``)."""
    def br(x, y):
        return gen(x, y)

    def tri(x, y, z):
        return (br(x, y), br(y, z))

    rows = [
        (br(c, d), tri(b, c, a), "W", (c, d), (a, b, c)), (br(c, d), tri(c, a, b), "Z", (c, d), (a, b, c)),
        (br(b, d), tri(b, c, a), "W", (b, d), (a, b, c)), (br(b, d), tri(c, a, b), "Z", (b, d), (a, b, c)),
        (br(a, d), tri(b, c, a), "W", (a, d), (a, b, c)), (br(a, d), tri(c, a, b), "Z", (a, d), (a, b, c)),
        (br(c, d), tri(b, d, a), "W", (c, d), (a, b, d)), (br(c, d), tri(d, a, b), "Z", (c, d), (a, b, d)),
        (br(c, b), tri(b, d, a), "W", (c, b), (a, b, d)), (br(c, b), tri(d, a, b), "Z", (c, b), (a, b, d)),
        (br(c, a), tri(b, d, a), "W", (c, a), (a, b, d)), (br(c, a), tri(d, a, b), "Z", (c, a), (a, b, d)),
        (br(b, d), tri(c, d, a), "W", (b, d), (a, c, d)), (br(b, d), tri(d, a, c), "Z", (b, d), (a, c, d)),
        (br(b, c), tri(c, d, a), "W", (b, c), (a, c, d)), (br(b, c), tri(d, a, c), "Z", (b, c), (a, c, d)),
        (br(a, b), tri(c, d, a), "W", (a, b), (a, c, d)), (br(a, b), tri(d, a, c), "Z", (a, b), (a, c, d)),
        (br(a, b), tri(c, d, b), "W", (a, b), (b, c, d)), (br(a, b), tri(d, b, c), "Z", (a, b), (b, c, d)),
        (br(a, c), tri(c, d, b), "W", (a, c), (b, c, d)), (br(a, c), tri(d, b, c), "Z", (a, c), (b, c, d)),
        (br(a, d), tri(c, d, b), "W", (a, d), (b, c, d)), (br(a, d), tri(d, b, c), "Z", (a, d), (b, c, d)),
    ]
    return [((g,) + t, sym(kind, p, trip)) for g, t, kind, p, trip in rows]


V_SYMBOLS: List[Tuple] = [s for _f, s in display_terms(1, 2, 3, 4)]


def computed_M(a: int = 1, b: int = 2, c: int = 3, d: int = 4) -> List[List[Fraction]]:
    """Coordinates of the 24 display 3-forms in the six-element basis (6 x 24)."""
    basis = quadruple_basis(a, b, c, d)
    cols = []
    for form, _s in display_terms(a, b, c, d):
        nf = normal_mono(form)
        if set(nf) - set(basis):
            raise AssertionError(f"{form} leaves the quadruple basis")
        cols.append([nf.get(m, ZERO) for m in basis])
    return [[cols[j][i] for j in range(24)] for i in range(6)]


M_TRANSCRIBED: Tuple[Tuple[int, ...], ...] = (
    (0, 0, 0, 0, 1, -1, -1, 1, 0, 0, -1, 1, 1, -1, 1, -1, 1, -1, 0, 0, 0, 0, -1, 0),
    (0, 0, 0, 0, -1, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 1, 0, 0),
    (0, 0, -1, 0, 0, 0, 1, 0, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1, -1, 1, -1, 1, -1),
    (1, -1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, -1, 0, -1, 0, 0, 0, 1, 0, 1, 0),
    (-1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, -1, 0, -1, 0, -1, 0),
)

N_TRANSCRIBED: Tuple[Tuple[int, ...], ...] = (
    (0, -1, 0, -1, 0, -1),
    (0, 0, 0, 0, 0, -1),
    (1, 1, 1, 1, 1, 1),
    (0, 0, 0, 1, 0, 1),
    (0, 0, 0, 0, -1, -1),
    (0, 0, 1, 0, 0, 0),
)

NM_TRANSCRIBED: Tuple[Tuple[int, ...], ...] = (
    (1, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 1, 0, 1, 0, 0),
    (1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1, 0, 1, 0, 1, 0),
    (0, -1, 0, -1, 0, -1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, -1, 0, -1, 0, 0, 0, 0),
    (-1, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, -1, 0, -1),
    (0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0),
    (0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 1, 0, 0),
)


def matrix_checksum(rows: Sequence[Sequence[int]]) -> str:
    text = ";".join(",".join(str(int(x)) for x in row) for row in rows)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    return [[sum((Fraction(a[i][k]) * Fraction(b[k][j]) for k in range(len(b))), ZERO)
             for j in range(len(b[0]))] for i in range(len(a))]


def rank(rows: Sequence[Sequence[Any]]) -> int:
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix([[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in rows],
                      (len(rows), len(rows[0])), QQ)
    return dm.rank()


def row_equation(row: Sequence[Any]) -> Dict[Tuple, Fraction]:
    return {V_SYMBOLS[j]: Fraction(x) for j, x in enumerate(row) if x}


def relation_equations() -> Dict[str, Dict[Tuple, Fraction]]:
    """The six relations at ``x, y, z, w = 1, 2, 3, 4`` in W/Z symbols.

    ``r > P = W`` and ``r > Q = -Z``.
    """
    def W(p, t, c=1):
        return (sym("W", p, t), Fraction(c))

    def Z(p, t, c=1):
        return (sym("Z", p, t), Fraction(c))

    rel = {
        "nat1": [W((1, 4), (1, 2, 3)), W((2, 4), (1, 2, 3)), W((3, 4), (1, 2, 3)),
                 Z((1, 2), (2, 3, 4)), Z((1, 3), (2, 3, 4)), Z((2, 3), (1, 2, 4), -1), Z((2, 3), (1, 3, 4), -1)],
        "nat2": [W((1, 2), (2, 3, 4)), W((1, 3), (2, 3, 4)), W((1, 4), (2, 3, 4)),
                 W((3, 4), (1, 2, 3)), W((3, 4), (1, 2, 4)), W((2, 3), (1, 3, 4), -1), W((2, 4), (1, 3, 4), -1)],
        "nat3": [Z((1, 4), (1, 2, 3), -1), Z((2, 4), (1, 2, 3), -1), Z((3, 4), (1, 2, 3), -1),
                 Z((1, 2), (1, 3, 4), -1), Z((1, 2), (2, 3, 4), -1), Z((1, 3), (1, 2, 4)), Z((2, 3), (1, 2, 4))],
        "nat4": [Z((1, 2), (2, 3, 4), -1), Z((1, 3), (2, 3, 4), -1), Z((1, 4), (2, 3, 4), -1),
                 W((2, 3), (1, 2, 4)), W((2, 3), (1, 3, 4)), W((2, 4), (1, 2, 3), -1), W((3, 4), (1, 2, 3), -1)],
        "nat5": [W((1, 2), (1, 3, 4)), W((1, 2), (2, 3, 4)), Z((3, 4), (1, 2, 3)), Z((3, 4), (1, 2, 4))],
        "nat6": [W((1, 3), (1, 2, 4)), W((1, 3), (2, 3, 4), -1), Z((1, 3), (2, 3, 4)),
                 Z((2, 4), (1, 2, 3), -1), W((2, 4), (1, 2, 3)), Z((2, 4), (1, 3, 4))],
    }
    out = {}
    for k, terms in rel.items():
        acc: Terms = {}
        for s, c in terms:
            add_term(acc, s, c)
        out[k] = acc
    return out


def match_rows_to_relations(nm: Sequence[Sequence[Any]]) -> Dict[int, Tuple[str, int]]:
    """Row index -> (relation name, sign) with ``row == sign * relation``."""
    eqs = relation_equations()
    out: Dict[int, Tuple[str, int]] = {}
    for i, row in enumerate(nm):
        r = row_equation(row)
        for name, e in eqs.items():
            for sign in (1, -1):
                if r == {k: sign * v for k, v in e.items()}:
                    out[i] = (name, sign)
    return out


def matrix_identities() -> Dict[str, Any]:
    M = [list(r) for r in M_TRANSCRIBED]
    N = [list(r) for r in N_TRANSCRIBED]
    NM = matmul(N, M)
    match = match_rows_to_relations(NM)
    return {
        "rank_M": rank(M),
        "rank_N": rank(N),
        "M_matches_forms": computed_M() == [[Fraction(x) for x in r] for r in M],
        "NM_matches_display": NM == [[Fraction(x) for x in r] for r in NM_TRANSCRIBED],
        "row_matches": match,
        "all_rows_matched": sorted(v[0] for v in match.values()) == sorted(relation_equations()),
    }


def symbolic_equals_MV(n: int = 4) -> List[str]:
    """Compare the symbolic 2-curvature with ``M V`` on every quadruple."""
    G = symbolic_two_curvature(n)
    bad: List[str] = []
    seen = set()
    for a, b, c, d in combinations(range(1, n + 1), 4):
        basis = quadruple_basis(a, b, c, d)
        terms = display_terms(a, b, c, d)
        for i, mono in enumerate(basis):
            seen.add(mono)
            want: Terms = {}
            for j, (_f, s) in enumerate(terms):
                add_term(want, s, Fraction(M_TRANSCRIBED[i][j]))
            got = G.get(mono, LinComb())
            if dict(got.terms) != want:
                bad.append(f"{mono}")
    for mono, v in G.items():
        if mono not in seen and not v.is_zero():
            bad.append(f"extra {mono}")
    return bad


# ---------------------------------------------------------------------------
# symmetric group action


def pull_mono(sigma: Perm, mono: FormMono) -> FormMono:
    """``L_sigma^* w_ij = w_{sigma^-1(i) sigma^-1(j)}`` (1-based labels, 0-based images)."""
    inv = perm_inverse(sigma)
    return tuple(gen(inv[i - 1] + 1, inv[j - 1] + 1) for i, j in mono)


def sn_pullback(sigma: Perm, conn: Connection2) -> Connection2:
    """Pull back the forms and move coefficient slots by ``sigma``."""
    A: Dict[FormMono, Tensor] = {}
    for m, v in conn.A.items():
        key = pull_mono(sigma, m)
        w = v.permute(sigma)
        A[key] = A[key] + w if key in A else w
    B: Dict[FormMono, Any] = {}
    for m, v in conn.B.items():
        key = pull_mono(sigma, m)
        w = v.permute(sigma)
        B[key] = B[key] + w if key in B else w
    return Connection2(conn.n, A, B)


def connection_defect(c1: Connection2, c2: Connection2) -> Dict[str, List[FormMono]]:
    """Normal-form monomials on which ``A`` or ``B`` differ."""
    out: Dict[str, List[FormMono]] = {"A": [], "B": []}
    a1, a2 = normalize_coeff_form(c1.A), normalize_coeff_form(c2.A)
    for m in sorted(set(a1) | set(a2)):
        x, y = a1.get(m), a2.get(m)
        if x is None or y is None or not (x - y).is_zero():
            out["A"].append(m)
    b1, b2 = c1.B_normal(), c2.B_normal()
    for m in sorted(set(b1) | set(b2)):
        x, y = b1.get(m), b2.get(m)
        if x is None or y is None or not (x - y).is_zero():
            out["B"].append(m)
    return out
