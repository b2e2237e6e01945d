"""Law-checking engine: seeded random cases and exhaustive sweeps for the
chain laws, with structured, replayable reports.

Reports are deterministic: identical specs produce byte-identical JSON.
Instances are passed as objects, so a test can inject a deliberately
corrupted subclass and watch the corresponding law fail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .core import (
    ChainError,
    derive_assert,
    derive_instrument,
    falsum,
    hom_check,
    PredObject,
    side_effect,
    truth,
)
from .registry import INSTANCES

DEFAULT_SEED = 20205
ENUMERATION_CAP = 10 ** 5
SCAN_CAP = 4000
CASE_ENUM_BUDGET = 2000
UNIQUE_SAMPLES = 12
MAX_WITNESSES = 3


@dataclass(frozen=True)
class CaseSpec:
    """One report's worth of work: a law, an instance, a seed, a case
    count, and size bounds.  Identical specs generate identical cases."""

    instance: str
    law: str
    seed: int = DEFAULT_SEED
    cases: int = 50
    bounds: dict = field(default_factory=dict)


@dataclass
class LawReport:
    instance: str
    law: str
    seed: int
    cases: int = 0
    failures: int = 0
    max_residual: float = 0.0
    witnesses: list = field(default_factory=list)

    def record(self, residual: float, ok: bool, witness=None):
        self.cases += 1
        self.max_residual = max(self.max_residual, float(residual))
        if not ok:
            self.failures += 1
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def to_jsonable(self) -> dict:
        return {
            "instance": self.instance,
            "law": self.law,
            "cases": self.cases,
            "failures": self.failures,
            "witnesses": self.witnesses,
            "max_residual": self.max_residual,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# Shared case plumbing.
# ---------------------------------------------------------------------------


def _tol(inst) -> float:
    return float(inst.eq_tol)


def _wit(inst, case, detail, **parts) -> dict:
    out = {"case": case, "detail": detail}
    for key, value in parts.items():
        out[key] = value
    return out


def _ser_obj(inst, X):
    return inst.object_to_json(X)


def _ser_pred(inst, X, p):
    return inst.pred_to_json(X, p)


def _ser_arrow(inst, f):
    return inst.arrow_to_json(f)


def _arrow_key(inst, f) -> str:
    return repr(inst.arrow_to_json(f))


# ---------------------------------------------------------------------------
# Law case functions.  Each runs ONE random case and returns
# (residual, ok, witness detail or None).
# ---------------------------------------------------------------------------


def _case_kleisli(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    Y = inst.rand_object(rng, bounds, like=X)
    Z = inst.rand_object(rng, bounds, like=X)
    W = inst.rand_object(rng, bounds, like=X)
    f = inst.rand_arrow(rng, X, Y, bounds)
    g = inst.rand_arrow(rng, Y, Z, bounds)
    h = inst.rand_arrow(rng, Z, W, bounds)
    r1 = inst.map_residual(inst.compose(h, inst.compose(g, f)),
                           inst.compose(inst.compose(h, g), f))
    r2 = inst.map_residual(inst.compose(f, inst.identity(X)), f)
    r3 = inst.map_residual(inst.compose(inst.identity(Y), f), f)
    res = max(r1, r2, r3)
    if res <= tol:
        return res, True, None
    return res, False, {"assoc": r1, "id_right": r2, "id_left": r3,
                        "f": _ser_arrow(inst, f)}


def _case_subst(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    Y = inst.rand_object(rng, bounds, like=X)
    Z = inst.rand_object(rng, bounds, like=X)
    f = inst.rand_arrow(rng, X, Y, bounds)
    g = inst.rand_arrow(rng, Y, Z, bounds)
    r = inst.rand_pred(rng, Z, bounds)
    lhs = inst.subst(f, inst.subst(g, r))
    rhs = inst.subst(inst.compose(g, f), r)
    r1 = inst.pred_residual(X, lhs, rhs)
    q = inst.rand_pred(rng, Y, bounds)
    r2 = inst.pred_residual(Y, inst.subst(inst.identity(Y), q), q)
    r3 = inst.pred_residual(X, inst.subst(f, inst.top(Y)), inst.top(X))
    res = max(r1, r2, r3)
    if res <= tol:
        return res, True, None
    return res, False, {"functoriality": r1, "identity": r2, "unit": r3,
                        "f": _ser_arrow(inst, f), "g": _ser_arrow(inst, g)}


def _case_truth_falsum(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    Y = inst.rand_object(rng, bounds, like=X)
    f = inst.rand_arrow(rng, X, Y, bounds)
    ok1 = hom_check(inst, f, truth(inst, X), truth(inst, Y))
    ok2 = hom_check(inst, f, falsum(inst, X), falsum(inst, Y))
    ok3 = hom_check(inst, f, falsum(inst, X), truth(inst, Y))
    # The substitution-based hom check and the transpose preconditions
    # must agree on whether f collapses p, and dually on whether a map
    # into X lands inside p.
    p = inst.rand_pred(rng, X, bounds)
    says_q = hom_check(inst, f, PredObject(X, p), falsum(inst, Y))
    try:
        inst.transpose_quotient(X, p, f)
        accepts_q = True
    except ChainError:
        accepts_q = False
    g = inst.rand_arrow(rng, Y, X, bounds)
    says_c = hom_check(inst, g, truth(inst, Y), PredObject(X, p))
    try:
        inst.transpose_comprehension(X, p, g)
        accepts_c = True
    except ChainError:
        accepts_c = False
    ok = ok1 and ok2 and ok3 and says_q == accepts_q and says_c == accepts_c
    if ok:
        return 0.0, True, None
    return 1.0, False, {"truth_hom": ok1, "falsum_hom": ok2, "mixed_hom": ok3,
                        "quotient_hom_check": says_q,
                        "quotient_transpose_accepts": accepts_q,
                        "comprehension_hom_check": says_c,
                        "comprehension_transpose_accepts": accepts_c,
                        "f": _ser_arrow(inst, f), "g": _ser_arrow(inst, g),
                        "p": _ser_pred(inst, X, p)}


def _unique_by_enumeration(inst, domain, codomain, untranspose, tol):
    """All candidate mediating maps must reach distinct composites."""
    seen = {}
    for cand in inst.iter_arrows(domain, codomain):
        key = _arrow_key(inst, untranspose(cand))
        if key in seen:
            return False
        seen[key] = True
    return True


def _unique_by_perturbation(inst, rng, bounds, g, factored, untranspose, tol):
    """Perturbed mediating candidates must move the composite."""
    for _ in range(bounds.get("unique_samples", UNIQUE_SAMPLES)):
        other = inst.perturb_arrow(rng, g, bounds)
        if inst.map_residual(other, g) <= max(tol, 1e-3):
            continue
        if inst.map_residual(untranspose(other), factored) <= tol:
            return False
    return True


def _case_quotient_adj(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    Y = inst.rand_object(rng, bounds, like=X)
    f = inst.rand_quotient_hom(rng, X, p, Y, bounds)
    g = inst.transpose_quotient(X, p, f)
    back = inst.untranspose_quotient(X, p, g)
    r1 = inst.map_residual(back, f)
    qobj = inst.quotient(X, p).obj
    g0 = inst.rand_arrow(rng, qobj, Y, bounds)
    f0 = inst.untranspose_quotient(X, p, g0)
    g0_back = inst.transpose_quotient(X, p, f0)
    r2 = inst.map_residual(g0_back, g0)

    def untr(cand):
        return inst.untranspose_quotient(X, p, cand)

    unique = True
    try:
        count = inst.count_arrows(qobj, Y)
    except (AttributeError, TypeError):
        count = None
    if count is not None and count <= bounds.get("case_enum_budget", CASE_ENUM_BUDGET):
        unique = _unique_by_enumeration(inst, qobj, Y, untr, tol)
    else:
        unique = _unique_by_perturbation(inst, rng, bounds, g, f, untr, tol)
    res = max(r1, r2)
    ok = res <= tol and unique
    if ok:
        return res, True, None
    return res, False, {"round_trip_from_hom": r1, "round_trip_from_map": r2,
                        "unique": unique, "X": _ser_obj(inst, X),
                        "p": _ser_pred(inst, X, p), "f": _ser_arrow(inst, f)}


def _case_comprehension_adj(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    Y = inst.rand_object(rng, bounds, like=X)
    f = inst.rand_comprehension_hom(rng, X, p, Y, bounds)
    g = inst.transpose_comprehension(X, p, f)
    back = inst.untranspose_comprehension(X, p, g)
    r1 = inst.map_residual(back, f)
    cobj = inst.comprehension(X, p).obj
    g0 = inst.rand_arrow(rng, Y, cobj, bounds)
    f0 = inst.untranspose_comprehension(X, p, g0)
    g0_back = inst.transpose_comprehension(X, p, f0)
    r2 = inst.map_residual(g0_back, g0)

    def untr(cand):
        return inst.untranspose_comprehension(X, p, cand)

    unique = True
    try:
        count = inst.count_arrows(Y, cobj)
    except (AttributeError, TypeError):
        count = None
    if count is not None and count <= bounds.get("case_enum_budget", CASE_ENUM_BUDGET):
        unique = _unique_by_enumeration(inst, Y, cobj, untr, tol)
    else:
        unique = _unique_by_perturbation(inst, rng, bounds, g, f, untr, tol)
    res = max(r1, r2)
    ok = res <= tol and unique
    if ok:
        return res, True, None
    return res, False, {"round_trip_from_hom": r1, "round_trip_from_map": r2,
                        "unique": unique, "X": _ser_obj(inst, X),
                        "p": _ser_pred(inst, X, p), "f": _ser_arrow(inst, f)}


def _case_factorization(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    composite = derive_assert(inst, X, p)
    closed = inst.assert_closed_form(X, p)
    res = inst.map_residual(composite, closed)
    if res <= tol:
        return res, True, None
    return res, False, {"X": _ser_obj(inst, X), "p": _ser_pred(inst, X, p),
                        "composite": _ser_arrow(inst, composite),
                        "closed_form": _ser_arrow(inst, closed)}


def _case_coincidence(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    q = inst.quotient(X, inst.ortho(X, p))
    c = inst.comprehension(X, inst.ceil(X, p))
    same = inst.objects_equal(q.obj, c.obj)
    extra = inst.coincidence_residual(X, p, q, c)
    ok = same and extra <= tol
    if ok:
        return extra, True, None
    return max(extra, 0.0 if same else 1.0), False, {
        "objects_equal": same, "carrier_residual": extra,
        "X": _ser_obj(inst, X), "p": _ser_pred(inst, X, p)}


def _case_sharpness(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    demorgan = inst.pred_residual(
        X, inst.floor(X, inst.ortho(X, p)),
        inst.ortho(X, inst.ceil(X, p)))
    sharp = inst.is_sharp(X, p)
    asrt = inst.assert_closed_form(X, p)
    idem = inst.map_residual(inst.compose(asrt, asrt), asrt)
    q = inst.quotient(X, inst.ortho(X, p))
    c = inst.comprehension(X, inst.ceil(X, p))
    left = inst.compose(q.unit, c.counit)
    left_res = inst.map_residual(left, inst.identity(c.obj))
    ok = (demorgan <= tol
          and (idem <= tol) == sharp
          and (left_res <= tol) == sharp)
    res = demorgan if ok else max(demorgan, 1.0)
    if ok:
        return demorgan, True, None
    return res, False, {"demorgan": demorgan, "sharp": sharp,
                        "assert_idempotency_residual": idem,
                        "left_composite_residual": left_res,
                        "X": _ser_obj(inst, X), "p": _ser_pred(inst, X, p)}


def _case_instrument(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    derived = derive_instrument(inst, X, p)
    closed = inst.instrument_closed_form(X, p)
    r1 = inst.map_residual(derived, closed)
    merged, free = side_effect(inst, X, p)
    if inst.name == "vn":
        predicted = inst.block_scalar_defect(X, p) <= tol
        unit_res = inst.subunital_defect(closed)
    else:
        predicted = True
        unit_res = 0.0
    ok = r1 <= tol and free == predicted and unit_res <= tol
    res = max(r1, unit_res)
    if ok:
        return res, True, None
    return max(res, 1.0 if free != predicted else res), False, {
        "derived_vs_closed": r1, "side_effect_free": free,
        "predicted_free": predicted, "X": _ser_obj(inst, X),
        "p": _ser_pred(inst, X, p)}


def _case_cp_sanity(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    p = inst.rand_pred(rng, X, bounds)
    Y = inst.rand_object(rng, bounds, like=X)
    q = inst.quotient(X, p)
    c = inst.comprehension(X, p)
    fq = inst.rand_quotient_hom(rng, X, p, Y, bounds)
    gq = inst.transpose_quotient(X, p, fq)
    fc = inst.rand_comprehension_hom(rng, X, p, Y, bounds)
    gc = inst.transpose_comprehension(X, p, fc)
    canonical = {
        "quotient_unit": q.unit,
        "comprehension_counit": c.counit,
        "assert": inst.assert_closed_form(X, p),
        "instrument": inst.instrument_closed_form(X, p),
        "quotient_transpose": gq,
        "comprehension_transpose": gc,
    }
    bad = {}
    worst = 0.0
    for label, arrow in canonical.items():
        ok_cp, report = inst.cp_check(arrow, tol)
        sub = inst.subunital_defect(arrow)
        min_eig = report.get("min_eig")
        if min_eig is not None:
            worst = max(worst, -min_eig)
        worst = max(worst, sub)
        if not ok_cp or sub > tol:
            bad[label] = {"cp": report, "subunital_defect": sub}
    cpred = inst.rand_pred(rng, Y, bounds)
    dpred = inst.rand_pred(rng, Y, bounds)
    # Cauchy-Schwarz for cP maps, c* d = cd since effects are self-adjoint;
    # cd is generally non-Hermitian, hence the singular-value norm
    from .vn import spectral_norm
    cd = tuple(cb @ db for cb, db in zip(cpred, dpred))
    cc = tuple(cb @ cb for cb in cpred)
    dd = tuple(db @ db for db in dpred)
    lhs = spectral_norm(inst.apply(fq, cd)) ** 2
    rhs = (spectral_norm(inst.apply(fq, cc))
           * spectral_norm(inst.apply(fq, dd)))
    cs_residual = max(0.0, lhs - rhs)
    ok = not bad and cs_residual <= tol
    if ok:
        return max(worst, cs_residual), True, None
    return max(worst, cs_residual, 1.0 if bad else 0.0), False, {
        "non_cp_maps": {k: {kk: vv for kk, vv in v.items()} for k, v in bad.items()},
        "cauchy_schwarz_residual": cs_residual,
        "X": _ser_obj(inst, X), "p": _ser_pred(inst, X, p)}


def _case_ring_decompose(inst, rng, bounds, tol):
    X = inst.rand_object(rng, bounds)
    e = inst.rand_pred(rng, X, bounds)
    dec = inst.decompose(X, e)
    r1 = inst.map_residual(inst.compose(dec.split, dec.merge), inst.identity(X))
    r2 = inst.map_residual(inst.compose(dec.merge, dec.split),
                           inst.identity(dec.pair))
    res = max(r1, r2)
    if res <= tol:
        return res, True, None
    return res, False, {"split_then_merge": r1, "merge_then_split": r2,
                        "X": _ser_obj(inst, X), "e": _ser_pred(inst, X, e)}


LAW_CASES = {
    "kleisli-laws": _case_kleisli,
    "subst-functor": _case_subst,
    "truth-falsum": _case_truth_falsum,
    "quotient-adjunction": _case_quotient_adj,
    "comprehension-adjunction": _case_comprehension_adj,
    "factorization": _case_factorization,
    "coincidence": _case_coincidence,
    "sharpness": _case_sharpness,
    "instrument": _case_instrument,
    "cp-sanity": _case_cp_sanity,
    "ring-decompose": _case_ring_decompose,
}

LAW_ORDER = list(LAW_CASES)

LAW_STATEMENTS = {
    "kleisli-laws": (
        "Composition of chain arrows is associative and the identity arrow "
        "is a two-sided unit."),
    "subst-functor": (
        "Substitution along a composite equals iterated substitution, "
        "substitution along the identity changes nothing, and substituting "
        "into truth yields truth."),
    "truth-falsum": (
        "Every arrow is a hom from truth to truth and from falsum to any "
        "predicate, and the substitution-based hom check agrees with the "
        "transpose preconditions."),
    "quotient-adjunction": (
        "Maps out of X that collapse p correspond one-to-one with maps out "
        "of the quotient carrier: transposing and composing back with the "
        "quotient unit are mutually inverse, and the mediating map is "
        "unique."),
    "comprehension-adjunction": (
        "Maps into X that land inside p correspond one-to-one with maps "
        "into the comprehension carrier: transposing and composing with "
        "the inclusion are mutually inverse, and the mediating map is "
        "unique."),
    "factorization": (
        "The assert map built as comprehension-inclusion after "
        "quotient-unit equals the instance's closed-form assert."),
    "coincidence": (
        "The quotient carrier of the complement of p is the same object as "
        "the comprehension carrier of the support of p."),
    "sharpness": (
        "floor(p-complement) equals ceil(p)-complement; the assert map is "
        "idempotent exactly for sharp p; the reverse composite "
        "(quotient-unit after comprehension-inclusion) is the identity on "
        "the carrier exactly for sharp p."),
    "instrument": (
        "The two-branch measurement combining assert-p and "
        "assert-p-complement equals its closed form; merging the branches "
        "recovers the identity exactly when measurement is side-effect "
        "free, which holds always classically and probabilistically but "
        "only for blockwise-scalar effects in the operator case."),
    "cp-sanity": (
        "All canonical operator-algebra maps are completely positive "
        "(blockwise Choi matrices positive semidefinite) and subunital, "
        "and they obey the Cauchy-Schwarz bound "
        "|f(c d)|^2 <= |f(c c)| * |f(d d)| for effects c, d."),
    "ring-decompose": (
        "An idempotent e splits a commutative ring into the product of its "
        "two corner ideals, with x -> (ex, (1-e)x) and addition as mutually "
        "inverse ring maps."),
}


def applicable_laws(inst) -> list:
    laws = {"kleisli-laws", "subst-functor", "truth-falsum",
            "quotient-adjunction", "comprehension-adjunction"}
    if inst.has_ortho:
        laws |= {"factorization", "coincidence", "sharpness"}
    if inst.has_instrument:
        laws.add("instrument")
    if inst.name == "vn":
        laws.add("cp-sanity")
    if inst.name == "ring":
        laws.add("ring-decompose")
    return [l for l in LAW_ORDER if l in laws]


# ---------------------------------------------------------------------------
# Exhaustive adjunction sweeps for the enumerable instances.
# ---------------------------------------------------------------------------


def _exhaustive_quotient(inst, report, X, p, Y, cap, scan_cap):
    qobj = inst.quotient(X, p).obj
    n_candidates = inst.count_arrows(qobj, Y)
    n_all = inst.count_arrows(X, Y)
    if n_candidates > cap:
        return
    composites = {}
    ok = True
    detail = None
    for g in inst.iter_arrows(qobj, Y):
        f = inst.untranspose_quotient(X, p, g)
        key = _arrow_key(inst, f)
        if key in composites:
            ok, detail = False, {"second_solution": _ser_arrow(inst, g)}
            break
        composites[key] = g
        back = inst.transpose_quotient(X, p, f)
        if inst.map_residual(back, g) > 0.0:
            ok, detail = False, {"round_trip": _ser_arrow(inst, g)}
            break
    if ok and n_all <= scan_cap:
        src_obj, dst_obj = PredObject(X, p), falsum(inst, Y)
        n_homs = 0
        for f in inst.iter_arrows(X, Y):
            if hom_check(inst, f, src_obj, dst_obj):
                n_homs += 1
                if _arrow_key(inst, f) not in composites:
                    ok, detail = False, {"unreached_hom": _ser_arrow(inst, f)}
                    break
        if ok and n_homs != len(composites):
            ok, detail = False, {"hom_count": n_homs,
                                 "candidate_count": len(composites)}
    if detail is not None:
        detail.update({"X": _ser_obj(inst, X), "p": _ser_pred(inst, X, p),
                       "Y": _ser_obj(inst, Y), "which": "quotient"})
    report.record(0.0 if ok else 1.0, ok, detail)


def _exhaustive_comprehension(inst, report, X, p, Y, cap, scan_cap):
    cobj = inst.comprehension(X, p).obj
    n_candidates = inst.count_arrows(Y, cobj)
    n_all = inst.count_arrows(Y, X)
    if n_candidates > cap:
        return
    composites = {}
    ok = True
    detail = None
    for g in inst.iter_arrows(Y, cobj):
        f = inst.untranspose_comprehension(X, p, g)
        key = _arrow_key(inst, f)
        if key in composites:
            ok, detail = False, {"second_solution": _ser_arrow(inst, g)}
            break
        composites[key] = g
        back = inst.transpose_comprehension(X, p, f)
        if inst.map_residual(back, g) > 0.0:
            ok, detail = False, {"round_trip": _ser_arrow(inst, g)}
            break
    if ok and n_all <= scan_cap:
        src_obj, dst_obj = truth(inst, Y), PredObject(X, p)
        n_homs = 0
        for f in inst.iter_arrows(Y, X):
            if hom_check(inst, f, src_obj, dst_obj):
                n_homs += 1
                if _arrow_key(inst, f) not in composites:
                    ok, detail = False, {"unreached_hom": _ser_arrow(inst, f)}
                    break
        if ok and n_homs != len(composites):
            ok, detail = False, {"hom_count": n_homs,
                                 "candidate_count": len(composites)}
    if detail is not None:
        detail.update({"X": _ser_obj(inst, X), "p": _ser_pred(inst, X, p),
                       "Y": _ser_obj(inst, Y), "which": "comprehension"})
    report.record(0.0 if ok else 1.0, ok, detail)


def run_exhaustive_adjunction(inst, which: str, bounds: dict,
                              seed: int = 0) -> LawReport:
    """Sweep every (object, predicate, object) triple the instance can
    enumerate within bounds, checking the full bijection of the chosen
    adjunction wherever the enumeration cap allows.

    Two budgets apply per triple.  The candidate sweep (round-trips plus
    injectivity over every mediating-map candidate) runs while the
    candidate space is at most `enumeration_cap`.  The surjectivity
    cross-check additionally re-derives the hom set through the generic
    substitution route, which costs a hom_check per arrow, so it gets
    the tighter `scan_cap`."""
    law = f"{which}-adjunction"
    report = LawReport(inst.name, law, seed)
    cap = bounds.get("enumeration_cap", ENUMERATION_CAP)
    scan_cap = min(cap, bounds.get("scan_cap", SCAN_CAP))
    objs = list(inst.iter_objects(bounds))
    for X in objs:
        for p in inst.iter_preds(X):
            for Y in objs:
                if not inst.comparable_objects(X, Y):
                    continue
                if which == "quotient":
                    _exhaustive_quotient(inst, report, X, p, Y, cap, scan_cap)
                else:
                    _exhaustive_comprehension(inst, report, X, p, Y, cap,
                                              scan_cap)
    return report


# ---------------------------------------------------------------------------
# Runner.
# ---------------------------------------------------------------------------


def _with_tolerance(inst, tol):
    if tol is None:
        return inst
    fresh = type(inst)()
    fresh.eq_tol = float(tol)
    return fresh


def run_law(inst, spec: CaseSpec) -> LawReport:
    """Run one law for `spec.cases` seeded cases (or exhaustively when
    spec.bounds['exhaustive'] is set on an enumerable adjunction law)."""
    inst = _with_tolerance(inst, spec.bounds.get("tolerance"))
    if spec.bounds.get("exhaustive") and spec.law.endswith("-adjunction"):
        which = spec.law.split("-")[0]
        return run_exhaustive_adjunction(inst, which, spec.bounds, spec.seed)
    case_fn = LAW_CASES[spec.law]
    report = LawReport(inst.name, spec.law, spec.seed)
    rng = random.Random(spec.seed)
    tol = _tol(inst)
    for i in range(spec.cases):
        try:
            residual, ok, detail = case_fn(inst, rng, spec.bounds, tol)
        except Exception as exc:  # laws must report, not crash
            report.record(1.0, False, _wit(inst, i, f"exception: {exc!r}"))
            continue
        witness = None
        if not ok:
            witness = _wit(inst, i, "law violated", **(detail or {}))
        report.record(residual, ok, witness)
    return report


def gen_case(spec: CaseSpec) -> dict:
    """Deterministic sample of (object, predicate, hom) for a spec; the
    same spec always produces the same serialized case."""
    inst = INSTANCES[spec.instance]
    rng = random.Random(spec.seed)
    X = inst.rand_object(rng, spec.bounds)
    p = inst.rand_pred(rng, X, spec.bounds)
    Y = inst.rand_object(rng, spec.bounds, like=X)
    f = inst.rand_quotient_hom(rng, X, p, Y, spec.bounds)
    return {"instance": spec.instance, "seed": spec.seed,
            "object": _ser_obj(inst, X), "pred": _ser_pred(inst, X, p),
            "target": _ser_obj(inst, Y), "hom": _ser_arrow(inst, f)}


def run_suite(specs, instances=None) -> dict:
    """Run every spec and aggregate: deterministic ordering by (instance,
    law, seed); ok is the all-pass flag.  `instances` may override the
    registry (used to inject corrupted instances in mutation tests)."""
    registry = dict(INSTANCES)
    if instances:
        registry.update(instances)
    reports = []
    for spec in specs:
        inst = registry[spec.instance]
        reports.append(run_law(inst, spec))
    reports.sort(key=lambda r: (r.instance, r.law, r.seed))
    return {"ok": all(r.failures == 0 for r in reports),
            "reports": [r.to_jsonable() for r in reports]}


# Default per-instance sampled case counts, sized so the whole default
# suite stays well under two minutes.
_DEFAULT_CASES = {
    "sets": 60, "nondet": 40, "dist": 80, "fp": 50,
    "hilb": 50, "ring": 40, "vn": 40,
}

# Small exhaustive sweeps included in the default suite; the acceptance
# tests run the full-size versions.
_DEFAULT_EXHAUSTIVE = {
    "sets": {"max_size": 3},
    "nondet": {"max_size": 2},
    "fp": {"fields": (2, 3), "max_dim": 2},
    "ring": {"max_order": 8},
}


def default_suite(seed: int = DEFAULT_SEED, cases: int = None,
                  instance: str = None, law: str = None, bounds=None) -> list:
    """The CLI's `check` workload: every applicable law on every instance,
    plus small exhaustive adjunction sweeps on the enumerable instances."""
    specs = []
    names = [instance] if instance else list(INSTANCES)
    for name in names:
        inst = INSTANCES[name]
        laws = applicable_laws(inst)
        if law:
            laws = [l for l in laws if l == law]
        for i, law_name in enumerate(laws):
            b = dict(bounds or {})
            specs.append(CaseSpec(name, law_name, seed + i,
                                  cases or _DEFAULT_CASES[name], b))
        if name in _DEFAULT_EXHAUSTIVE and (law is None or law.endswith("-adjunction")):
            for which in ("quotient", "comprehension"):
                law_name = f"{which}-adjunction"
                if law and law_name != law:
                    continue
                b = dict(bounds or {})
                b.update(_DEFAULT_EXHAUSTIVE[name])
                b["exhaustive"] = True
                specs.append(CaseSpec(name, law_name, 0, 0, b))
    return specs
