"""Operator-algebra chain: effects, corners, the congruence instrument.

numpy.linalg appears only as an oracle; the package's own spectral
routines are what is under test.
"""

import math
import random

import numpy as np
import pytest

from effectus import (
    HomConditionError,
    ValidationError,
    derive_assert,
    derive_instrument,
    side_effect,
)
from effectus.vn import (
    MatrixAlgebra,
    VnChain,
    basis_elements,
    check_effect,
    elt_residual,
    op_norm,
    unvec,
    vec,
)

VN = VnChain()

M1 = MatrixAlgebra((1,))
M2 = MatrixAlgebra((2,))
M3 = MatrixAlgebra((3,))
M2_M1 = MatrixAlgebra((2, 1))

SQ2 = 1 / math.sqrt(2)


def elt(*blocks):
    return tuple(np.asarray(b, dtype=complex) for b in blocks)


def numpy_sqrt(b):
    # same contract as the package's op_sqrt (eigenvalues inside the rank
    # cutoff are flushed to zero), on numpy's independent eigensolver
    w, v = np.linalg.eigh(np.asarray(b, dtype=complex))
    vals = np.where(w > 1e-9, np.sqrt(np.clip(w, 0, None)), 0.0)
    return v @ np.diag(vals) @ v.conj().T


def spectral_norm(blocks):
    return max((float(np.linalg.norm(b, 2)) for b in blocks if b.size),
               default=0.0)


# ---------------------------------------------------------------------------
# Elements, vectorization, arrows.
# ---------------------------------------------------------------------------


def test_vec_unvec_round_trip():
    a = elt([[1, 2j], [3, 4]], [[5]])
    v = vec(M2_M1, a)
    assert v.shape == (5,)
    assert elt_residual(unvec(M2_M1, v), a) == 0.0
    assert sum(1 for _ in basis_elements(M2_M1)) == M2_M1.vdim == 5


def test_from_fn_is_the_linear_extension():
    rng = random.Random(3)
    u = np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex)
    f = VN.from_fn(M2, M2, lambda a: (u @ a[0] @ u.conj().T,))
    for _ in range(20):
        a = elt([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(2)]
                 for _ in range(2)])
        assert elt_residual(VN.apply(f, a), (u @ a[0] @ u.conj().T,)) <= 1e-12


def test_compose_runs_element_maps_in_reverse():
    f = VN.from_fn(M2, M2, lambda a: (a[0] * 0.5,))
    g = VN.from_fn(M2, M2, lambda a: (a[0].T,))
    h = VN.compose(g, f)
    a = elt([[1, 2], [3, 4]])
    assert elt_residual(VN.apply(h, a), VN.apply(f, VN.apply(g, a))) <= 1e-12
    assert elt_residual(VN.apply(h, a), (a[0].T * 0.5,)) <= 1e-12


def test_effect_validation():
    check_effect(M2, elt([[0.5, 0], [0, 1.0]]))
    with pytest.raises(ValidationError):
        check_effect(M2, elt([[0, 1], [0, 0]]))  # not Hermitian
    with pytest.raises(ValidationError):
        check_effect(M2, elt([[2.0, 0], [0, 0]]))  # above 1
    with pytest.raises(ValidationError):
        check_effect(M2, elt([[1.0]]))  # wrong shape
    with pytest.raises(ValidationError):
        check_effect(M2_M1, (np.eye(2),))  # missing block
    with pytest.raises(ValidationError):
        VN.arrow(M2, M2, np.eye(3))


# ---------------------------------------------------------------------------
# Fibres: effects, orthocomplement, sharpening.
# ---------------------------------------------------------------------------


def test_sharpen_canned():
    p = elt(np.diag([1.0, 0.5, 0.0]))
    assert elt_residual(VN.floor(M3, p), elt(np.diag([1.0, 0, 0]))) <= 1e-12
    assert elt_residual(VN.ceil(M3, p), elt(np.diag([1.0, 1.0, 0]))) <= 1e-12
    proj = elt(np.diag([1.0, 0.0, 1.0]))
    assert elt_residual(VN.floor(M3, proj), proj) <= 1e-12
    assert elt_residual(VN.ceil(M3, proj), proj) <= 1e-12


def test_floor_ortho_de_morgan():
    rng = random.Random(7)
    for _ in range(40):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        p = VN.rand_pred(rng, X)
        lhs = VN.floor(X, VN.ortho(X, p))
        rhs = VN.ortho(X, VN.ceil(X, p))
        assert elt_residual(lhs, rhs) <= 1e-9


def test_subst_canned():
    u = np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex)
    conj = VN.from_fn(M2, M2, lambda a: (u @ a[0] @ u.conj().T,))
    got = VN.subst(conj, elt(np.diag([1.0, 0.0])))
    assert elt_residual(got, elt(np.full((2, 2), 0.5))) <= 1e-12
    depol = VN.from_fn(M2, M2, lambda a: (np.trace(a[0]) / 2 * np.eye(2),))
    got = VN.subst(depol, elt(np.diag([1.0, 0.0])))
    assert elt_residual(got, elt(np.eye(2) * 0.5)) <= 1e-12
    assert elt_residual(VN.subst(depol, M2.one()), M2.one()) <= 1e-12


# ---------------------------------------------------------------------------
# Corners: comprehension and quotient.
# ---------------------------------------------------------------------------


def test_comprehension_corner_canned():
    p = elt(np.diag([1.0, 0.5]))
    c = VN.comprehension(M2, p)
    assert c.obj.block_dims == (1,)
    a = elt([[1.0, 2.0], [3.0, 4.0]])
    assert elt_residual(VN.apply(c.counit, a), elt([[1.0]])) <= 1e-12


def test_quotient_corner_canned():
    p = elt(np.diag([1.0, 0.5]))
    q = VN.quotient(M2, p)
    assert q.obj.block_dims == (1,)
    got = VN.apply(q.unit, elt([[1.0]]))
    assert elt_residual(got, elt(np.diag([0.0, 0.5]))) <= 1e-12


def test_corner_edges_are_empty_algebras():
    zero = VN.bottom(M2)
    assert VN.comprehension(M2, zero).obj.block_dims == ()
    assert VN.quotient(M2, M2.one()).obj.block_dims == ()
    full = VN.comprehension(M2, M2.one())
    assert full.obj is M2  # dims match, so the corner is the algebra itself


def test_multi_block_corner():
    p = (np.diag([1.0, 0.0]), np.array([[1.0]]))
    c = VN.comprehension(M2_M1, p)
    assert c.obj.block_dims == (1, 1)
    a = elt([[1.0, 2.0], [3.0, 4.0]], [[7.0]])
    assert elt_residual(VN.apply(c.counit, a), elt([[1.0]], [[7.0]])) <= 1e-12


def test_objects_equal_tracks_the_isometry():
    p1 = elt(np.diag([1.0, 0.0]))
    p2 = elt(np.diag([0.0, 1.0]))
    c1 = VN.comprehension(M2, p1)
    c2 = VN.comprehension(M2, p2)
    assert c1.obj.block_dims == c2.obj.block_dims == (1,)
    assert not VN.objects_equal(c1.obj, c2.obj)
    again = VN.comprehension(M2, p1)
    assert VN.objects_equal(c1.obj, again.obj)


def test_coincidence_of_corners():
    rng = random.Random(13)
    for _ in range(30):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        p = VN.rand_pred(rng, X)
        q = VN.quotient(X, VN.ortho(X, p))
        c = VN.comprehension(X, VN.ceil(X, p))
        assert VN.objects_equal(q.obj, c.obj)


def test_left_composite_identity_iff_projection():
    sharp = elt(np.diag([1.0, 0.0]))
    c = VN.comprehension(M2, VN.ceil(M2, sharp))
    q = VN.quotient(M2, VN.ortho(M2, sharp))
    left = VN.compose(q.unit, c.counit)
    assert VN.map_residual(left, VN.identity(c.obj)) <= 1e-9
    fuzzy = elt(np.diag([1.0, 0.5]))
    c2 = VN.comprehension(M2, VN.ceil(M2, fuzzy))
    q2 = VN.quotient(M2, VN.ortho(M2, fuzzy))
    left2 = VN.compose(q2.unit, c2.counit)
    assert VN.map_residual(left2, VN.identity(c2.obj)) > 1e-3


def test_transpose_hom_conditions_reject():
    p = elt(np.diag([1.0, 0.0]))
    with pytest.raises(HomConditionError):
        VN.transpose_quotient(M2, p, VN.identity(M2))
    with pytest.raises(HomConditionError):
        VN.transpose_comprehension(M2, p, VN.identity(M2))


def test_transpose_round_trips():
    rng = random.Random(17)
    worst = 0.0
    for _ in range(40):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        Y = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        p = VN.rand_pred(rng, X)
        f = VN.rand_quotient_hom(rng, X, p, Y)
        g = VN.transpose_quotient(X, p, f)
        worst = max(worst, VN.map_residual(
            VN.untranspose_quotient(X, p, g), f))
        h = VN.rand_comprehension_hom(rng, X, p, Y)
        k = VN.transpose_comprehension(X, p, h)
        worst = max(worst, VN.map_residual(
            VN.untranspose_comprehension(X, p, k), h))
    assert worst <= 1e-9


# ---------------------------------------------------------------------------
# Assert and instrument.
# ---------------------------------------------------------------------------


def test_assert_canned():
    p = elt(np.diag([1.0, 0.5]))
    asrt = VN.assert_closed_form(M2, p)
    got = VN.apply(asrt, elt([[1.0, 1.0], [1.0, 1.0]]))
    want = elt([[1.0, SQ2], [SQ2, 0.5]])
    assert elt_residual(got, want) <= 1e-9


def rand_hermitian_elt(rng, X):
    blocks = []
    for n in X.block_dims:
        m = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1))
                       for _ in range(n)] for _ in range(n)])
        blocks.append((m + m.conj().T) / 2)
    return tuple(blocks)


def test_assert_matches_kraus_oracle():
    rng = random.Random(19)
    for _ in range(60):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        p = VN.rand_pred(rng, X)
        asrt = derive_assert(VN, X, p)
        roots = [numpy_sqrt(b) for b in p]
        a = rand_hermitian_elt(rng, X)
        want = tuple(r @ blk @ r for r, blk in zip(roots, a))
        assert elt_residual(VN.apply(asrt, a), want) <= 1e-9


def test_derived_assert_equals_closed_form():
    rng = random.Random(23)
    for _ in range(30):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        p = VN.rand_pred(rng, X)
        assert VN.map_residual(derive_assert(VN, X, p),
                               VN.assert_closed_form(X, p)) <= 1e-9


def test_assert_idempotent_iff_projection():
    proj = elt(np.diag([1.0, 0.0]))
    a1 = VN.assert_closed_form(M2, proj)
    assert VN.map_residual(VN.compose(a1, a1), a1) <= 1e-9
    fuzzy = elt(np.diag([1.0, 0.5]))
    a2 = VN.assert_closed_form(M2, fuzzy)
    assert VN.map_residual(VN.compose(a2, a2), a2) > 1e-3


def test_instrument_unital_and_cp():
    rng = random.Random(29)
    for _ in range(25):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        p = VN.rand_pred(rng, X)
        instr = derive_instrument(VN, X, p)
        assert elt_residual(VN.apply(instr, instr.dst.one()), X.one()) <= 1e-9
        ok, report = VN.cp_check(instr)
        assert ok, report
        assert VN.subunital_defect(instr) <= 1e-9


def test_side_effect_freeness_is_block_scalarity():
    scalar = elt(np.eye(2) * 0.3)
    merged, free = side_effect(VN, M2, scalar)
    assert free
    assert VN.map_residual(merged, VN.identity(M2)) <= 1e-9
    assert VN.block_scalar_defect(M2, scalar) <= 1e-12
    skew = elt(np.diag([1.0, 0.0]))
    merged2, free2 = side_effect(VN, M2, skew)
    assert not free2
    assert VN.block_scalar_defect(M2, skew) == pytest.approx(0.5)


def test_seq_product_canned():
    rng = random.Random(31)
    half = elt(np.eye(2) * 0.5)
    b = VN.rand_pred(rng, M2)
    got = VN.seq_product(M2, half, b)
    assert elt_residual(got, tuple(0.5 * blk for blk in b)) <= 1e-12
    # sequential products of effects stay effects
    for _ in range(25):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        a, c = VN.rand_pred(rng, X), VN.rand_pred(rng, X)
        check_effect(X, VN.seq_product(X, a, c))


# ---------------------------------------------------------------------------
# Complete positivity and Cauchy-Schwarz.
# ---------------------------------------------------------------------------


def test_cp_check_rejects_the_transpose_map():
    t = VN.from_fn(M2, M2, lambda a: (a[0].T,))
    ok, report = VN.cp_check(t)
    assert not ok
    assert report["min_eig"] == pytest.approx(-1.0, abs=1e-9)
    ok2, report2 = VN.cp_check(VN.identity(M2))
    assert ok2 and report2["min_eig"] >= -1e-9


def test_random_kraus_maps_are_cp_and_subunital():
    rng = random.Random(37)
    for _ in range(40):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        Y = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        f = VN.rand_arrow(rng, X, Y)
        ok, report = VN.cp_check(f)
        assert ok, report
        assert VN.subunital_defect(f) <= 1e-9


def test_cauchy_schwarz_for_cp_maps():
    rng = random.Random(41)
    for _ in range(60):
        X = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        Y = VN.rand_object(rng, {"max_blocks": 2, "max_block_dim": 3})
        f = VN.rand_arrow(rng, Y, X)
        c = VN.rand_pred(rng, X)
        d = VN.rand_pred(rng, X)
        cd = tuple(cb @ db for cb, db in zip(c, d))
        cc = tuple(cb @ cb for cb in c)
        dd = tuple(db @ db for db in d)
        lhs = spectral_norm([np.asarray(b) for b in VN.apply(f, cd)]) ** 2
        rhs = (spectral_norm([np.asarray(b) for b in VN.apply(f, cc)])
               * spectral_norm([np.asarray(b) for b in VN.apply(f, dd)]))
        assert lhs <= rhs + 1e-9


def test_op_norm_is_the_spectral_radius():
    a = elt(np.diag([0.25, 0.75]), [[0.5]])
    assert op_norm(a) == pytest.approx(0.75, abs=1e-12)


def test_json_shapes():
    assert VN.object_to_json(M2_M1) == [2, 1]
    p = elt(np.diag([1.0, 0.0]))
    assert VN.pred_to_json(M2, p) == [[[[1.0, 0.0], [0.0, 0.0]],
                                       [[0.0, 0.0], [0.0, 0.0]]]]
