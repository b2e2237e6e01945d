"""Linear chains: prime-field spaces and complex inner-product spaces."""

import itertools
import random

import numpy as np
import pytest

from effectus import (
    HomConditionError,
    PredObject,
    ValidationError,
    falsum,
    hom_check,
    truth,
)
from effectus.linear import (
    FpChain,
    FpSpace,
    FpSubspace,
    HilbChain,
    HilbSpace,
    Subspace,
    fp_kernel,
    fp_span,
    mat_mul,
    mat_vec,
    rref,
)

FP = FpChain()
HILB = HilbChain()

F2_2 = FpSpace(2, 2)
F3_2 = FpSpace(3, 2)


def all_vectors(X: FpSpace):
    return itertools.product(range(X.p), repeat=X.dim)

def in_span(P: FpSubspace, v) -> bool:
    return rref(P.rows + (tuple(v),), P.space.dim, P.space.p)[0] == P.rows


# ---------------------------------------------------------------------------
# F_p linear algebra kernels against brute force.
# ---------------------------------------------------------------------------


def test_rref_canned():
    rows, pivots = rref(((2, 1), (1, 2)), 2, 3)
    assert rows == ((1, 2),) and pivots == (0,)
    rows, pivots = rref(((1, 0), (0, 1)), 2, 2)
    assert rows == ((1, 0), (0, 1)) and pivots == (0, 1)
    assert rref((), 3, 5) == ((), ())


def test_rref_preserves_the_row_space():
    rng = random.Random(11)
    for _ in range(60):
        p = rng.choice((2, 3, 5))
        d = rng.randint(1, 3)
        raw = tuple(tuple(rng.randrange(p) for _ in range(d))
                    for _ in range(rng.randint(0, 3)))
        red, pivots = rref(raw, d, p)
        X = FpSpace(p, d)
        P = FpSubspace(X, red)
        # every original row lies in the reduced span and vice versa
        for r in raw:
            assert in_span(P, r)
        span = {v for v in all_vectors(X) if in_span(P, v)}
        assert len(span) == p ** len(red)
        assert pivots == tuple(sorted(pivots))


def test_kernel_matches_exhaustive_solution_set():
    rng = random.Random(23)
    for _ in range(60):
        p = rng.choice((2, 3))
        d = rng.randint(1, 3)
        rows = rng.randint(0, 3)
        mat = tuple(tuple(rng.randrange(p) for _ in range(d))
                    for _ in range(rows))
        X = FpSpace(p, d)
        K = FpSubspace(X, fp_kernel(mat, d, p))
        solutions = {v for v in all_vectors(X)
                     if not any(mat_vec(mat, v, p))}
        spanned = {v for v in all_vectors(X) if in_span(K, v)}
        assert spanned == solutions


def test_mat_mul_through_zero_dimensional_spaces():
    # a zero-row factor loses its column count; the width argument
    # restores it, keeping composites through the 0 space well shaped
    assert mat_mul((), (), 2) == ()
    assert mat_mul(((),), (), 3, width=2) == ((0, 0),)
    zero_to = FP.arrow(F2_2, FpSpace(2, 0), ())
    back = FP.arrow(FpSpace(2, 0), FpSpace(2, 3), ((), (), ()))
    comp = FP.compose(back, zero_to)
    assert comp.data == ((0, 0), (0, 0), (0, 0))
    assert FP.map_residual(comp, FP.arrow(F2_2, FpSpace(2, 3),
                                          comp.data)) == 0.0


def test_subspace_validation_requires_reduced_echelon():
    with pytest.raises(ValidationError):
        FpSubspace(F3_2, ((2, 0),))
    with pytest.raises(ValidationError):
        FpSubspace(F2_2, ((1, 0), (1, 1)))
    with pytest.raises(ValidationError):
        FpSpace(4, 1)


# ---------------------------------------------------------------------------
# F_p chain structure.
# ---------------------------------------------------------------------------


def test_quotient_drops_the_pivot_coordinate():
    P = fp_span(F2_2, ((1, 0),))
    q = FP.quotient(F2_2, P)
    assert q.obj == FpSpace(2, 1)
    assert q.unit.data == ((0, 1),)
    for a, b in all_vectors(F2_2):
        assert mat_vec(q.unit.data, (a, b), 2) == (b,)


def test_comprehension_includes_the_basis():
    P = fp_span(F3_2, ((1, 1),))
    c = FP.comprehension(F3_2, P)
    assert c.obj == FpSpace(3, 1)
    assert c.counit.data == ((1,), (1,))
    for t in range(3):
        assert mat_vec(c.counit.data, (t,), 3) == (t, t)


def test_trivial_subspaces():
    top = FP.top(F3_2)
    assert FP.quotient(F3_2, top).obj == FpSpace(3, 0)
    assert FP.comprehension(F3_2, top).obj == F3_2
    bot = FP.bottom(F3_2)
    assert FP.quotient(F3_2, bot).obj == F3_2
    assert FP.comprehension(F3_2, bot).obj == FpSpace(3, 0)


def test_subst_is_the_preimage():
    rng = random.Random(31)
    for _ in range(80):
        p = rng.choice((2, 3))
        X = FpSpace(p, rng.randint(0, 3))
        Y = FpSpace(p, rng.randint(0, 3))
        f = FP.rand_arrow(rng, X, Y, {})
        q = FP.rand_pred(rng, Y, {})
        pre = FP.subst(f, q)
        for v in all_vectors(X):
            assert in_span(pre, v) == in_span(q, mat_vec(f.data, v, p))


def test_transposes_factor_uniquely_small_exhaustive():
    X = F2_2
    P = fp_span(X, ((1, 0),))
    Y = FpSpace(2, 1)
    q = FP.quotient(X, P)
    hits = 0
    for f in FP.iter_arrows(X, Y):
        if hom_check(FP, f, PredObject(X, P), falsum(FP, Y)):
            g = FP.transpose_quotient(X, P, f)
            mediating = [h for h in FP.iter_arrows(q.obj, Y)
                         if FP.compose(h, q.unit).data == f.data]
            assert mediating == [g] or [m.data for m in mediating] == [g.data]
            hits += 1
        else:
            with pytest.raises(HomConditionError):
                FP.transpose_quotient(X, P, f)
    assert hits == 2
    c = FP.comprehension(X, P)
    for f in FP.iter_arrows(Y, X):
        if hom_check(FP, f, truth(FP, Y), PredObject(X, P)):
            g = FP.transpose_comprehension(X, P, f)
            mediating = [h.data for h in FP.iter_arrows(Y, c.obj)
                         if FP.compose(c.counit, h).data == f.data]
            assert mediating == [g.data]
        else:
            with pytest.raises(HomConditionError):
                FP.transpose_comprehension(X, P, f)


def test_round_trip_through_full_rank_predicate():
    # regression: a predicate of full rank used to produce 0-width rows
    # in the sampled hom, crashing the substitution sweep
    rng = random.Random(3)
    X = F2_2
    P = FP.top(X)
    Y = FpSpace(2, 2)
    f = FP.rand_quotient_hom(rng, X, P, Y, {})
    assert f.data == ((0, 0), (0, 0))
    g = FP.transpose_quotient(X, P, f)
    assert FP.map_residual(FP.untranspose_quotient(X, P, g), f) == 0.0
    assert hom_check(FP, f, PredObject(X, P), falsum(FP, Y))


def test_fp_json_shapes():
    assert FP.object_to_json(F3_2) == {"field": 3, "dim": 2}
    P = fp_span(F3_2, ((1, 1),))
    assert FP.pred_to_json(F3_2, P) == [[1, 1]]
    f = FP.identity(F2_2)
    assert FP.arrow_to_json(f) == [[1, 0], [0, 1]]


def test_count_and_iter_arrows_agree():
    X, Y = F2_2, FpSpace(2, 1)
    arrows = list(FP.iter_arrows(X, Y))
    assert len(arrows) == FP.count_arrows(X, Y) == 4
    assert len({a.data for a in arrows}) == 4


def test_iter_preds_counts_subspaces():
    # F_2^2 has 5 subspaces; F_3^2 has 6 (0, four lines, the plane)
    assert sum(1 for _ in FP.iter_preds(F2_2)) == 5
    assert sum(1 for _ in FP.iter_preds(F3_2)) == 6


# ---------------------------------------------------------------------------
# Hilbert chain.
# ---------------------------------------------------------------------------


def test_orthocomplement_canned_axis():
    X = HilbSpace(2)
    P = Subspace(X, np.array([[1.0], [0.0]]))
    C = HILB.ortho(X, P)
    assert C.rank == 1
    assert abs(abs(C.basis[1, 0]) - 1) < 1e-12 and abs(C.basis[0, 0]) < 1e-12
    v1, v2 = HILB.decompose_vector(X, P, (3, 4))
    assert np.allclose(v1, (3, 0)) and np.allclose(v2, (0, 4))


def test_orthocomplement_canned_diagonal():
    X = HilbSpace(2)
    P = Subspace(X, np.array([[1.0], [1.0]]) / np.sqrt(2))
    C = HILB.ortho(X, P)
    v1, v2 = HILB.decompose_vector(X, P, (1, 0))
    assert np.allclose(v1, (0.5, 0.5), atol=1e-12)
    assert np.allclose(v2, (0.5, -0.5), atol=1e-12)
    assert abs(np.vdot(v1, v2)) < 1e-12
    assert np.allclose(C.projector() @ v2, v2, atol=1e-12)


def test_reconstruction_on_random_vectors():
    rng = random.Random(47)
    worst = 0.0
    for _ in range(200):
        X = HilbSpace(rng.randint(1, 5))
        p = HILB.rand_pred(rng, X, {})
        v = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1))
                      for _ in range(X.dim)])
        v1, v2 = HILB.decompose_vector(X, p, v)
        worst = max(worst,
                    float(np.max(np.abs(v1 + v2 - v))) if X.dim else 0.0,
                    float(np.max(np.abs(p.projector() @ v2))) if X.dim else 0.0)
    assert worst <= 1e-9


def test_projectors_idempotent_and_self_adjoint():
    rng = random.Random(53)
    for _ in range(50):
        X = HilbSpace(rng.randint(1, 5))
        p = HILB.rand_pred(rng, X, {})
        pr = p.projector()
        assert np.max(np.abs(pr @ pr - pr)) <= 1e-9
        assert np.max(np.abs(pr - pr.conj().T)) <= 1e-9
        assert p.rank + HILB.ortho(X, p).rank == X.dim


def test_subspace_canonical_basis_is_description_independent():
    X = HilbSpace(3)
    a = Subspace(X, np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]]))
    b = Subspace(X, np.array([[-3.0], [-3.0], [0.0]]))
    assert a.rank == b.rank == 1
    assert np.max(np.abs(a.basis - b.basis)) < 1e-9
    mixed = Subspace(X, np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]))
    axes = Subspace(X, np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    assert np.max(np.abs(mixed.basis - axes.basis)) < 1e-9


def test_subst_kernel_dimension_matches_numpy_rank():
    rng = random.Random(61)
    for _ in range(60):
        X = HilbSpace(rng.randint(1, 4))
        Y = HilbSpace(rng.randint(1, 4))
        f = HILB.rand_arrow(rng, X, Y, {})
        q = HILB.rand_pred(rng, Y, {})
        pre = HILB.subst(f, q)
        off = (np.eye(Y.dim) - q.projector()) @ f.data
        assert pre.rank == X.dim - np.linalg.matrix_rank(off, tol=1e-9)
        if pre.rank:
            assert np.max(np.abs(off @ pre.basis)) <= 1e-9


def test_hilb_transposes_round_trip():
    rng = random.Random(71)
    worst = 0.0
    for _ in range(40):
        X = HilbSpace(rng.randint(1, 4))
        Y = HilbSpace(rng.randint(1, 4))
        p = HILB.rand_pred(rng, X, {})
        f = HILB.rand_quotient_hom(rng, X, p, Y, {})
        g = HILB.transpose_quotient(X, p, f)
        worst = max(worst, HILB.map_residual(
            HILB.untranspose_quotient(X, p, g), f))
        h = HILB.rand_comprehension_hom(rng, X, p, Y, {})
        k = HILB.transpose_comprehension(X, p, h)
        worst = max(worst, HILB.map_residual(
            HILB.untranspose_comprehension(X, p, k), h))
    assert worst <= 1e-9


def test_hilb_hom_conditions_reject():
    X = HilbSpace(2)
    P = Subspace(X, np.array([[1.0], [0.0]]))
    f = HILB.identity(X)
    with pytest.raises(HomConditionError):
        HILB.transpose_quotient(X, P, f)
    g = HILB.arrow(X, X, np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(HomConditionError):
        HILB.transpose_comprehension(X, P, g)


def test_assert_is_the_projector():
    X = HilbSpace(2)
    P = Subspace(X, np.array([[1.0], [1.0]]) / np.sqrt(2))
    asrt = HILB.assert_closed_form(X, P)
    assert np.allclose(asrt.data, np.full((2, 2), 0.5), atol=1e-12)
    assert np.max(np.abs(asrt.data @ asrt.data - asrt.data)) <= 1e-12


def test_coincidence_of_quotient_and_comprehension_carriers():
    rng = random.Random(83)
    for _ in range(30):
        X = HilbSpace(rng.randint(1, 4))
        p = HILB.rand_pred(rng, X, {})
        q = HILB.quotient(X, HILB.ortho(X, p))
        c = HILB.comprehension(X, p)
        assert q.obj == c.obj
        assert HILB.coincidence_residual(X, p, q, c) <= 1e-9
