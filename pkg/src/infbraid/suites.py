"""Named verification suites shared by the CLI and the acceptance tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

from .algebra_core import ONE, perm_from_cycles
from .braiding2 import (
    build_braiding,
    categorified_four_term,
    check_axioms,
    check_totally_symmetric,
    jacobi_defect,
    perturbed,
    symm_pq_defects,
)
from .crossed_modules import StringModel, check_crossed_module, sl2_trivial_model
from .enveloping import Tensor, classical_four_term_defect
from .relative_tensor import OracleDisagreement, SpanCapExceeded, relation_instance, un_space_for
from .samplers import random_an_tensor, random_un, random_word, samples
from .two_category import braiding, compose_one, identity

SCHEMA_VERSION = 1
SUITES = (
    "pbw", "classical-4t", "un-space", "two-cat-laws", "quasi-invariant", "coherence",
    "braiding-axioms", "categorified-4t", "matrices", "kz-flatness", "sn-invariance",
)


@dataclass
class Config:
    degree_bound: int = 6
    n: int = 4
    c: Fraction = Fraction(-2)
    seed: int = 0
    oracle: Optional[str] = None
    model_path: Optional[str] = None
    timings: bool = False

    def mode(self, arity: int = 3) -> str:
        if self.oracle:
            return self.oracle
        return "both" if arity <= 3 else "rewrite"

    def echo(self) -> Dict[str, Any]:
        return {
            "degree_bound": self.degree_bound,
            "n": self.n,
            "c": f"{self.c.numerator}/{self.c.denominator}",
            "seed": self.seed,
            "oracle": self.oracle or "auto",
            "model": self.model_path or "string",
        }


@dataclass
class Check:
    id: str
    paper_ref: str
    defect_term_count: int
    status: str = ""
    elapsed_ms: Optional[int] = None
    detail: str = ""

    def __post_init__(self) -> None:
        if not self.status:
            self.status = "pass" if self.defect_term_count == 0 else "fail"

    def as_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "paper_ref": self.paper_ref,
            "status": self.status,
            "defect_term_count": self.defect_term_count,
            "elapsed_ms": self.elapsed_ms,
        }


class Context:
    """Lazily built model, quotient space, tensor and braiding for one config."""

    def __init__(self, config: Config):
        self.config = config
        self._cache: Dict[str, Any] = {}
        if config.model_path:
            from .crossed_modules import load_model

            self.model, self.section = load_model(config.model_path)
        else:
            self.model, self.section = StringModel(config.degree_bound), None

    def _get(self, key: str, build: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def space(self):
        return self._get("space", lambda: un_space_for(self.model))

    @property
    def tensor(self):
        from .quasi_invariant import default_tensor

        return self._get("tensor", lambda: default_tensor(self.space, self.section, self.config.c))

    @property
    def braiding(self):
        return self._get("braiding", lambda: build_braiding(self.tensor, check=False))

    def pq(self, arity: int):
        return self._get(f"pq{arity}", lambda: self.braiding.pq(arity))

    @property
    def is_string(self) -> bool:
        return isinstance(self.model, StringModel)


def _count_el(x) -> int:
    if hasattr(x, "space") and hasattr(x, "tensor"):
        return 0 if x.is_zero() else len(x.space.canonical(x.tensor))
    if isinstance(x, Tensor):
        return len(x)
    return len(x)


# ---------------------------------------------------------------------------
# suites


def suite_pbw(ctx: Context) -> List[Check]:
    model = ctx.model
    eng = ctx.space.engine
    sl2 = model.sl2_basis() if hasattr(model, "sl2_basis") else model.g_basis()
    bad = 0
    for length in range(5):
        for word in product(sl2, repeat=length):
            if eng.normal_word_with(word, "leftmost") != eng.normal_word_with(word, "rightmost"):
                bad += 1
    out = [Check("pbw.confluence.exhaustive", "PBW normal form of sl2 words", bad)]
    bad = 0
    rng = random.Random(ctx.config.seed)
    for _ in range(200):
        word = random_word(rng, sl2, 6)
        if eng.normal_word_with(word, random.Random(rng.getrandbits(32))) != eng.normal_word(word):
            bad += 1
    out.append(Check("pbw.confluence.random", "PBW normal form of sl2 words", bad))
    D = min(ctx.config.degree_bound, 3)
    bad = 0
    letters = model.g_basis(D)
    for word in product(letters, repeat=3):
        if eng.normal_word_with(word, "rightmost") != eng.normal_word(word):
            bad += 1
    out.append(Check("pbw.confluence.g_words", "PBW normal form in U(g)", bad))
    axioms = check_crossed_module(model, D)
    out.append(Check("pbw.crossed_module_axioms", "differential crossed module axioms",
                     sum(len(v) for v in axioms.values())))
    return out


def suite_classical_4t(ctx: Context) -> List[Check]:
    """The 4-term relation lives in ``U(sl2)``; the String engine would add the ``alpha`` part."""
    from .quasi_invariant import casimir_like

    out: List[Check] = []
    if ctx.is_string:
        eng = un_space_for(sl2_trivial_model()).engine
        out.append(Check("classical-4t.defect", "classical four-term relation",
                         len(classical_four_term_defect(casimir_like(eng)))))
        f, e = (0, 0), (0, 2)
        control = Tensor.elementary(eng, (e,), (f,))
        detected = not classical_four_term_defect(control).is_zero()
        out.append(Check("classical-4t.negative_control", "classical four-term relation (control e(x)f)",
                         0 if detected else 1))
    else:
        out.append(Check("classical-4t.defect", "classical four-term relation",
                         len(classical_four_term_defect(ctx.tensor.r))))
    return out


def _un_pairs(ctx: Context, count: int = 200):
    space = ctx.space
    g = space.model.g_basis(3)
    h = space.model.h_basis(3)
    for i, rng in enumerate(samples(ctx.config.seed, count)):
        n = rng.randint(1, 3)
        a = random_an_tensor(space, n, rng, terms=3, word_len=3, degree_bound=3)
        if rng.random() < 0.5:
            words = [tuple(tuple(random_word(rng, g, 1) for _ in range(n))) for _ in range(3)]
            inst = relation_instance(space, n, words[0], (rng.randrange(n), rng.choice(h)), words[1],
                                     (rng.randrange(n), rng.choice(h)), words[2])
            b = a + inst.scale(rng.choice((1, -2, 3)))
        else:
            b = random_an_tensor(space, n, rng, terms=3, word_len=3, degree_bound=3)
        yield i, n, a, b


def suite_un_space(ctx: Context) -> List[Check]:
    space = ctx.space
    eng = space.engine
    out: List[Check] = []
    disagree = 0
    for _i, _n, a, b in _un_pairs(ctx):
        ea, eb = space.element(a), space.element(b)
        rewrite = space.equal(ea, eb, "rewrite")
        span = space.in_relations((a - b))
        disagree += rewrite != span
    out.append(Check("un-space.oracle_agreement", "transport relations defining U^(n)", disagree))
    if ctx.is_string:
        from .crossed_modules import form_letter, poly_letter

        dx, xpoly, one = form_letter(0), poly_letter(1), poly_letter(0)
        lhs = space.element(Tensor.elementary(eng, (dx,), (xpoly,)))
        rhs = space.element(Tensor.elementary(eng, (xpoly,), (dx,)))
        out.append(Check("un-space.dx_x", "transport relation with u = x", 0 if space.equal(lhs, rhs, "both") else 1))
        z = space.element(Tensor.elementary(eng, (one,), (dx,)))
        out.append(Check("un-space.one_dx", "constant h-letter against a 1-form", 0 if space.equal(z, space.zero(2), "both") else 1))
        bad = 0
        sl2 = ctx.model.sl2_basis()
        for x in sl2:
            for y in sl2:
                lhs = (Tensor.elementary(eng, (one,), (x, y)) - Tensor.elementary(eng, (one,), (y, x)))
                rhs = Tensor(eng, 2, {((one,), (l,)): c for l, c in ctx.model._sl2_bracket(x, y).items()})
                if not space.equal(space.element(lhs), space.element(rhs), "both"):
                    bad += 1
        out.append(Check("un-space.key_relation", "1 (x) [X,Y] in U^(2) for sl2 pairs", bad))
    return out


def suite_two_cat_laws(ctx: Context) -> List[Check]:
    from .laws import GL_LAWS, LAWS, check_gl, check_laws

    cfg = ctx.config
    D = min(cfg.degree_bound, 2)
    b = ctx.braiding if ctx.is_string else None
    rep = check_laws(ctx.space, b, seed=cfg.seed, count=25, degree_bound=D, mode=cfg.mode(3))
    gl = check_gl(ctx.space, b, seed=cfg.seed, count=25, degree_bound=D, mode=cfg.mode(3))
    out = [Check(f"two-cat-laws.{law}", "strict linear 2-category laws", rep.term_count(law)) for law in LAWS]
    out += [Check(f"two-cat-laws.gl.{law}", "crossed module gl(x)", gl.term_count(law)) for law in GL_LAWS]
    return out


def suite_quasi_invariant(ctx: Context) -> List[Check]:
    from .quasi_invariant import phi_pairing_check, validate_tensor

    cfg = ctx.config
    res = validate_tensor(ctx.tensor, cfg.degree_bound, cfg.mode(2))
    out = [Check(f"quasi-invariant.{k}", "symmetric quasi-invariant tensor", len(v)) for k, v in res.items()]
    if ctx.is_string:
        phi = phi_pairing_check(ctx.model, ctx.space.engine)
        out.append(Check("quasi-invariant.phi_pairing", "pairing of the 3-cocycle with r",
                         sum(len(v) for v in phi.values())))
    return out


def suite_coherence(ctx: Context) -> List[Check]:
    from .quasi_invariant import coherence_defect

    d = coherence_defect(ctx.tensor)
    return [Check("coherence.defect", "coherence of the quasi-invariant tensor", _count_el(d))]


def _generator_family(ctx: Context):
    sp, b = ctx.space, ctx.braiding
    mors = {
        "id1": identity(sp, 1), "id2": identity(sp, 2), "r11": b.r(1, 1),
        "B11": braiding(sp, 1, 1), "rB": compose_one(b.r(1, 1), braiding(sp, 1, 1)),
    }
    twos = {"P": b.P(), "Q": b.Q()}
    return mors, twos


def suite_braiding_axioms(ctx: Context) -> List[Check]:
    D = min(ctx.config.degree_bound, 3)
    b = ctx.braiding
    mors, twos = _generator_family(ctx)
    rep = check_axioms(b, mors, twos, degree_bound=D, max_arity=4)
    out = [Check(f"braiding-axioms.{ax}", "strict infinitesimal 2-braiding", rep.term_count(ax)) for ax in rep.defects]
    sym = check_totally_symmetric(b, mors, degree_bound=D, max_arity=4)
    out += [Check(f"braiding-axioms.{ax}", "totally symmetric 2-braiding", sym.term_count(ax)) for ax in sym.defects]
    out.append(Check("braiding-axioms.jacobi", "cyclic sum of P", _count_el(jacobi_defect(ctx.pq(3)))))
    return out


def suite_categorified_4t(ctx: Context) -> List[Check]:
    pq = ctx.pq(4)
    rels = categorified_four_term(pq)
    out = [Check(f"categorified-4t.{k}", "categorified four-term relations", _count_el(v)) for k, v in rels.items()]
    rng = random.Random(ctx.config.seed)
    delta = random_un(ctx.space, 3, rng, terms=2)
    while delta.is_zero():
        delta = random_un(ctx.space, 3, rng, terms=2)
    broken = categorified_four_term(perturbed(pq, delta))
    detected = any(not v.is_zero() for v in broken.values())
    out.append(Check("categorified-4t.perturbation_control", "categorified four-term relations (perturbed P)",
                     0 if detected else 1))
    return out


def suite_matrices(ctx: Context) -> List[Check]:
    from . import kz_forms as kz

    res = kz.matrix_identities()
    out = [
        Check("matrices.rank_M", "rank of M", 0 if res["rank_M"] == 6 else 1),
        Check("matrices.rank_N", "rank of N", 0 if res["rank_N"] == 6 else 1),
        Check("matrices.M_from_forms", "2-curvature coefficient matrix M", 0 if res["M_matches_forms"] else 1),
        Check("matrices.NM_display", "product N M", 0 if res["NM_matches_display"] else 1),
        Check("matrices.rows_vs_relations", "rows of N M V = 0 against the six relations",
              6 - len({v[0] for v in res["row_matches"].values()})),
        Check("matrices.symbolic_MV", "symbolic 2-curvature equals M V", len(kz.symbolic_equals_MV(4))),
    ]
    return out


def suite_kz(ctx: Context) -> List[Check]:
    from . import kz_forms as kz

    n = ctx.config.n
    pq = ctx.pq(n)
    conn = kz.build_connection(pq, n)
    fake = kz.fake_curvature_defect(conn)
    zeta = kz.fake_curvature_zeta_defect(conn, pq, ctx.model.g_basis(min(ctx.config.degree_bound, 3)))
    G = kz.two_curvature(conn)
    out = [
        Check("kz-flatness.fake_curvature", "fake flatness of the KZ 2-connection",
              sum(len(v) for v in fake.values())),
        Check("kz-flatness.fake_curvature_zeta", "fake flatness of the KZ 2-connection (zeta parts)",
              sum(_count_el(v) for v in zeta.values())),
        Check("kz-flatness.two_curvature", "2-curvature of the KZ 2-connection",
              sum(_count_el(v) for v in G.values())),
    ]
    if ctx.is_string:
        from .quasi_invariant import trivial_tensor

        model = sl2_trivial_model()
        sp = un_space_for(model)
        b0 = build_braiding(trivial_tensor(sp), check=False)
        c0 = kz.build_connection(b0.pq(n), n)
        b_zero = all(v.is_zero() for v in c0.B.values())
        out.append(Check("kz-flatness.classical_h0", "classical KZ flatness (h = 0)",
                         sum(len(v) for v in kz.curvature(c0).values()) + (0 if b_zero else 1)))
    return out


def suite_sn(ctx: Context) -> List[Check]:
    from . import kz_forms as kz

    n = ctx.config.n
    conn = kz.build_connection(ctx.pq(n), n)
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            sigma = perm_from_cycles(n, (i, j))
            d = kz.connection_defect(kz.sn_pullback(sigma, conn), conn)
            out.append(Check(f"sn-invariance.({i}{j})", "S_n invariance of the KZ 2-connection",
                             len(d["A"]) + len(d["B"])))
    return out


REGISTRY: Dict[str, Callable[[Context], List[Check]]] = {
    "pbw": suite_pbw,
    "classical-4t": suite_classical_4t,
    "un-space": suite_un_space,
    "two-cat-laws": suite_two_cat_laws,
    "quasi-invariant": suite_quasi_invariant,
    "coherence": suite_coherence,
    "braiding-axioms": suite_braiding_axioms,
    "categorified-4t": suite_categorified_4t,
    "matrices": suite_matrices,
    "kz-flatness": suite_kz,
    "sn-invariance": suite_sn,
}


@dataclass
class SuiteReport:
    suite: str
    config: Dict[str, Any]
    checks: List[Check] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.status == "pass" for c in self.checks)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "status": "pass" if self.passed else ("error" if self.error else "fail"),
            "config": self.config,
            "checks": [c.as_dict() for c in self.checks],
            **({"error": self.error} if self.error else {}),
        }


def run_suite(name: str, config: Config, ctx: Optional[Context] = None) -> SuiteReport:
    if name != "all" and name not in REGISTRY:
        raise KeyError(f"unknown suite {name!r}")
    ctx = ctx or Context(config)
    report = SuiteReport(name, config.echo())
    for suite in (SUITES if name == "all" else (name,)):
        t0 = time.perf_counter()
        checks = REGISTRY[suite](ctx)
        ms = int(round((time.perf_counter() - t0) * 1000)) if config.timings else None
        for c in checks:
            c.elapsed_ms = ms
        report.checks.extend(checks)
    return report
