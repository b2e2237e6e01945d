"""Operator-algebra chain: finite direct sums of full complex matrix
algebras, effects as predicates, and completely positive subunital maps
running opposite to the chain arrows.

A chain arrow X -> Y stores the superoperator of the underlying linear
map on elements, which goes Y -> X: the matrix sends the vectorization of
a Y element to the vectorization of an X element.  Corner algebras (the
quotient and comprehension carriers) remember their parent and embedding
isometries, so carrier equality is decidable and the measurement branch
maps compose with everything else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Arrow,
    ChainInstance,
    ComprehensionResult,
    HomConditionError,
    QuotientResult,
    ValidationError,
)
from . import vnlinalg as la


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    """Direct sum of full matrix algebras; an element is one complex
    n_i x n_i matrix per block.  corner, when present, is a pair
    (parent algebra, tuple of (parent block index, isometry columns))."""

    block_dims: tuple
    corner: object = None

    def __post_init__(self):
        for n in self.block_dims:
            if not isinstance(n, int) or n < 1:
                raise ValidationError(f"block dimension {n!r} must be an int >= 1")

    @property
    def vdim(self) -> int:
        return sum(n * n for n in self.block_dims)

    def one(self) -> tuple:
        return tuple(np.eye(n, dtype=complex) for n in self.block_dims)

    def zero_elt(self) -> tuple:
        return tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims)

    def __repr__(self):
        if not self.block_dims:
            return "0-alg"
        return " (+) ".join(f"M{n}" for n in self.block_dims)


def vec(A: MatrixAlgebra, elt) -> np.ndarray:
    if not A.block_dims:
        return np.zeros(0, dtype=complex)
    return np.concatenate([np.asarray(b, dtype=complex).reshape(-1) for b in elt])


def unvec(A: MatrixAlgebra, v: np.ndarray) -> tuple:
    out = []
    pos = 0
    for n in A.block_dims:
        out.append(np.asarray(v[pos:pos + n * n], dtype=complex).reshape(n, n))
        pos += n * n
    return tuple(out)


def basis_elements(A: MatrixAlgebra):
    """Matrix-unit elements in vectorization order."""
    for bi, n in enumerate(A.block_dims):
        for k in range(n):
            for l in range(n):
                elt = A.zero_elt()
                elt[bi][k, l] = 1.0
                yield elt


def superop_from_fn(src: MatrixAlgebra, dst: MatrixAlgebra, fn) -> np.ndarray:
    """Matrix of an element map dst -> src, as a chain arrow src -> dst
    stores it."""
    cols = [vec(src, fn(e)) for e in basis_elements(dst)]
    if not cols:
        return np.zeros((src.vdim, 0), dtype=complex)
    return np.column_stack(cols)


def elt_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def elt_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def elt_scale(t, a):
    return tuple(t * x for x in a)


def elt_residual(a, b) -> float:
    return max((la.max_abs(x - y) for x, y in zip(a, b)), default=0.0)


def check_effect(A: MatrixAlgebra, p, tol: float = 1e-9) -> None:
    if len(p) != len(A.block_dims):
        raise ValidationError("block count mismatch")
    for n, b in zip(A.block_dims, p):
        b = np.asarray(b)
        if b.shape != (n, n):
            raise ValidationError(f"block shape {b.shape} != ({n}, {n})")
        if not la.is_hermitian(b, tol):
            raise ValidationError("effect block is not Hermitian")
        w, _ = la.hermitian_eig(b)
        if w.size and (float(w.min()) < -tol or float(w.max()) > 1 + tol):
            raise ValidationError(f"spectrum {w} leaves [0, 1]")


def op_norm(elt) -> float:
    """Largest eigenvalue magnitude over the blocks of a Hermitian element."""
    worst = 0.0
    for b in elt:
        w, _ = la.hermitian_eig(b)
        if w.size:
            worst = max(worst, float(abs(w).max()))
    return worst


def spectral_norm(elt) -> float:
    """Largest singular value over the blocks; works for non-Hermitian
    elements such as a product of two effects."""
    worst = 0.0
    for b in elt:
        m = np.asarray(b, dtype=complex)
        if not m.size:
            continue
        w, _ = la.hermitian_eig(m.conj().T @ m)
        if w.size:
            worst = max(worst, float(np.sqrt(max(w.max(), 0.0))))
    return worst


class _Corner:
    """A corner pAp presented as its own algebra plus the embedding data."""

    __slots__ = ("algebra", "isoms", "parent")

    def __init__(self, parent: MatrixAlgebra, proj_blocks):
        isoms = []
        dims = []
        for i, pr in enumerate(proj_blocks):
            V = la.gram_schmidt_columns(pr)
            w, _ = la.hermitian_eig(pr)
            eig_rank = int((w > 0.5).sum())
            if V.shape[1] != eig_rank:
                raise ValidationError("corner rank disagreement")
            if V.shape[1]:
                isoms.append((i, V))
                dims.append(V.shape[1])
        self.parent = parent
        self.isoms = tuple(isoms)
        if tuple(dims) == parent.block_dims and len(dims) == len(parent.block_dims):
            self.algebra = parent
        else:
            self.algebra = MatrixAlgebra(tuple(dims), (parent, self.isoms))

    def compress(self, a) -> tuple:
        return tuple(la.dagger(V) @ a[i] @ V for i, V in self.isoms)

    def embed(self, b) -> tuple:
        out = [np.zeros((n, n), dtype=complex) for n in self.parent.block_dims]
        for (i, V), blk in zip(self.isoms, b):
            out[i] = V @ blk @ la.dagger(V)
        return tuple(out)


class VnChain(ChainInstance):
    """Finite-dimensional operator algebras; predicates are effects, the
    sharp ones projections, and the derived assert is the p-congruence."""

    name = "vn"
    description = "matrix algebras and completely positive subunital maps"
    exact = False
    all_sharp = False
    eq_tol = 1e-9
    hom_tol = 1e-6

    # ---- category ----

    def arrow(self, X, Y, superop) -> Arrow:
        superop = np.asarray(superop, dtype=complex)
        if superop.shape != (X.vdim, Y.vdim):
            raise ValidationError(
                f"superoperator shape {superop.shape} != ({X.vdim}, {Y.vdim})")
        return Arrow(X, Y, superop)

    def from_fn(self, X, Y, fn) -> Arrow:
        return Arrow(X, Y, superop_from_fn(X, Y, fn))

    def apply(self, f: Arrow, elt) -> tuple:
        return unvec(f.src, f.data @ vec(f.dst, elt))

    def identity(self, X) -> Arrow:
        return Arrow(X, X, np.eye(X.vdim, dtype=complex))

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        self.check_composable(g, f)
        return Arrow(f.src, g.dst, f.data @ g.data)

    def map_residual(self, f: Arrow, g: Arrow) -> float:
        if not (self.objects_equal(f.src, g.src) and self.objects_equal(f.dst, g.dst)):
            return 1.0
        return la.max_abs(f.data - g.data)

    def objects_equal(self, A, B) -> bool:
        if A is B:
            return True
        if A.block_dims != B.block_dims:
            return False
        ca, cb = A.corner, B.corner
        if (ca is None) != (cb is None):
            return False
        if ca is None:
            return True
        if not self.objects_equal(ca[0], cb[0]):
            return False
        if tuple(i for i, _ in ca[1]) != tuple(i for i, _ in cb[1]):
            return False
        return all(la.max_abs(va - vb) <= self.eq_tol
                   for (_, va), (_, vb) in zip(ca[1], cb[1]))

    # ---- fibre ----

    def top(self, X):
        return X.one()

    def bottom(self, X):
        return X.zero_elt()

    def pred_leq(self, X, p, q) -> bool:
        for pb, qb in zip(p, q):
            w, _ = la.hermitian_eig(((qb - pb) + la.dagger(qb - pb)) / 2)
            if w.size and float(w.min()) < -self.eq_tol:
                return False
        return True

    def pred_residual(self, X, p, q) -> float:
        return elt_residual(p, q)

    def ortho(self, X, p):
        return elt_sub(X.one(), p)

    def ceil(self, X, p):
        return tuple(la.support_proj(b) for b in p)

    def floor(self, X, p):
        return tuple(la.unit_proj(b) for b in p)

    def subst(self, f: Arrow, q):
        return self.ortho(f.src, self.apply(f, self.ortho(f.dst, q)))

    # ---- quotient / comprehension ----

    def quotient(self, X, p) -> QuotientResult:
        s = self.ortho(X, p)
        corner = _Corner(X, [la.support_proj(b) for b in s])
        roots = [la.op_sqrt(b) for b in s]

        def unit_fn(b):
            emb = corner.embed(b)
            return tuple(r @ blk @ r for r, blk in zip(roots, emb))

        return QuotientResult(corner.algebra,
                              self.from_fn(X, corner.algebra, unit_fn))

    def comprehension(self, X, p) -> ComprehensionResult:
        corner = _Corner(X, [la.unit_proj(b) for b in p])
        return ComprehensionResult(
            corner.algebra,
            self.from_fn(corner.algebra, X, corner.compress))

    def transpose_quotient(self, X, p, f: Arrow) -> Arrow:
        s = self.ortho(X, p)
        img_one = self.apply(f, f.dst.one())
        for sb, ub in zip(s, img_one):
            gap = ((sb - ub) + la.dagger(sb - ub)) / 2
            w, _ = la.hermitian_eig(gap)
            if w.size and float(w.min()) < -self.hom_tol:
                raise HomConditionError(
                    f"vn: image of 1 exceeds the complement by {-float(w.min()):.3g}")
        corner = _Corner(X, [la.support_proj(b) for b in s])
        pinv_roots = [la.op_pinv(la.op_sqrt(b)) for b in s]

        def g_fn(b):
            a = self.apply(f, b)
            conj = tuple(r @ blk @ r for r, blk in zip(pinv_roots, a))
            return corner.compress(conj)

        return self.from_fn(corner.algebra, f.dst, g_fn)

    def transpose_comprehension(self, X, p, f: Arrow) -> Arrow:
        gap = elt_residual(self.apply(f, p), self.apply(f, X.one()))
        if gap > self.hom_tol:
            raise HomConditionError(
                f"vn: predicate and 1 have images {gap:.3g} apart")
        corner = _Corner(X, [la.unit_proj(b) for b in p])

        def g_fn(b):
            return self.apply(f, corner.embed(b))

        return self.from_fn(f.src, corner.algebra, g_fn)

    # ---- assert / instrument / sequential product ----

    def assert_closed_form(self, X, p) -> Arrow:
        roots = [la.op_sqrt(b) for b in p]
        return self.from_fn(
            X, X, lambda a: tuple(r @ blk @ r for r, blk in zip(roots, a)))

    def instrument_closed_form(self, X, p) -> Arrow:
        return self.instrument_combine(
            X,
            self.assert_closed_form(X, p),
            self.assert_closed_form(X, self.ortho(X, p)))

    def instrument_combine(self, X, branch_pass: Arrow, branch_fail: Arrow) -> Arrow:
        dd = MatrixAlgebra(X.block_dims + X.block_dims)
        return Arrow(X, dd, np.hstack([branch_pass.data, branch_fail.data]))

    def codiagonal(self, X) -> Arrow:
        dd = MatrixAlgebra(X.block_dims + X.block_dims)
        eye = np.eye(X.vdim, dtype=complex)
        return Arrow(dd, X, np.vstack([eye, eye]))

    def seq_product(self, X, a, b) -> tuple:
        roots = [la.op_sqrt(blk) for blk in a]
        return tuple(r @ bb @ r for r, bb in zip(roots, b))

    def block_scalar_defect(self, X, p) -> float:
        """How far an effect is from being a scalar in every block; the
        instrument is side-effect free exactly when this is ~0."""
        worst = 0.0
        for n, b in zip(X.block_dims, p):
            t = np.trace(b) / n
            worst = max(worst, la.max_abs(b - t * np.eye(n)))
        return worst

    # ---- complete positivity ----

    def cp_check(self, f: Arrow, tol: float = 1e-9):
        """Blockwise Choi test of the underlying element map.  Returns
        (ok, report) where the report carries the most negative eigenvalue
        and the (src block, dst block) pair it came from."""
        X, Y = f.src, f.dst
        worst = None
        for j, n in enumerate(Y.block_dims):
            units = {}
            for k in range(n):
                for l in range(n):
                    e = Y.zero_elt()
                    e[j][k, l] = 1.0
                    units[k, l] = self.apply(f, e)
            for i, m in enumerate(X.block_dims):
                choi = np.zeros((n * m, n * m), dtype=complex)
                for k in range(n):
                    for l in range(n):
                        choi[k * m:(k + 1) * m, l * m:(l + 1) * m] = units[k, l][i]
                defect = la.max_abs(choi - la.dagger(choi))
                if defect > tol:
                    return False, {"src_block": i, "dst_block": j,
                                   "min_eig": None, "herm_defect": defect}
                w, _ = la.hermitian_eig((choi + la.dagger(choi)) / 2)
                low = float(w.min()) if w.size else 0.0
                if worst is None or low < worst[0]:
                    worst = (low, i, j)
        if worst is None:
            return True, {"min_eig": 0.0, "src_block": None, "dst_block": None}
        ok = worst[0] >= -tol
        return ok, {"min_eig": worst[0], "src_block": worst[1], "dst_block": worst[2]}

    def subunital_defect(self, f: Arrow) -> float:
        """How far f(1) pokes above 1 or below 0."""
        u = self.apply(f, f.dst.one())
        worst = 0.0
        for b in u:
            w, _ = la.hermitian_eig((b + la.dagger(b)) / 2)
            if w.size:
                worst = max(worst, float(w.max()) - 1.0, -float(w.min()))
        return max(worst, 0.0)

    # ---- sampling ----

    def _rand_complex(self, rng, rows, cols) -> np.ndarray:
        vals = [complex(rng.gauss(0, 1), rng.gauss(0, 1))
                for _ in range(rows * cols)]
        return np.array(vals, dtype=complex).reshape(rows, cols)

    def rand_object(self, rng, bounds, like=None) -> MatrixAlgebra:
        k = rng.randint(1, bounds.get("max_blocks", 2))
        dims = tuple(rng.randint(1, bounds.get("max_block_dim", 3))
                     for _ in range(k))
        return MatrixAlgebra(dims)

    def rand_pred(self, rng, X, bounds=None):
        mode = rng.random()
        blocks = []
        for n in X.block_dims:
            if mode < 0.05:
                blocks.append(np.zeros((n, n), dtype=complex))
            elif mode < 0.10:
                blocks.append(np.eye(n, dtype=complex))
            elif mode < 0.40:
                h = self._rand_complex(rng, n, n)
                _, u = la.hermitian_eig((h + la.dagger(h)) / 2)
                d = np.diag([float(rng.randint(0, 1)) for _ in range(n)])
                pr = u @ d.astype(complex) @ la.dagger(u)
                blocks.append((pr + la.dagger(pr)) / 2)
            else:
                g = self._rand_complex(rng, n, n)
                a = la.dagger(g) @ g
                w, _ = la.hermitian_eig(a)
                lam = float(w.max()) if w.size else 0.0
                t = rng.random()
                b = a * (t / lam) if lam > 1e-12 else np.zeros((n, n), complex)
                blocks.append((b + la.dagger(b)) / 2)
        return tuple(blocks)

    def rand_arrow(self, rng, X, Y, bounds=None) -> Arrow:
        kraus = {}
        for i, m in enumerate(X.block_dims):
            for j, n in enumerate(Y.block_dims):
                kraus[i, j] = [self._rand_complex(rng, m, n)
                               for _ in range(rng.randint(0, 2))]

        def fn(b):
            out = []
            for i, m in enumerate(X.block_dims):
                acc = np.zeros((m, m), dtype=complex)
                for j in range(len(Y.block_dims)):
                    for kk in kraus[i, j]:
                        acc = acc + kk @ b[j] @ la.dagger(kk)
                out.append(acc)
            return tuple(out)

        s = superop_from_fn(X, Y, fn)
        f = Arrow(X, Y, s)
        lam = op_norm(self.apply(f, Y.one()))
        if lam > 1e-12:
            t = 0.3 + 0.7 * rng.random()
            f = Arrow(X, Y, s * (t / max(lam, t)))
        return f

    def rand_quotient_hom(self, rng, X, p, Y, bounds=None) -> Arrow:
        f0 = self.rand_arrow(rng, X, Y)
        return self.compose(f0, self.assert_closed_form(X, self.ortho(X, p)))

    def rand_comprehension_hom(self, rng, X, p, Y, bounds=None) -> Arrow:
        corner = self.comprehension(X, p)
        h = self.rand_arrow(rng, Y, corner.obj)
        return self.compose(corner.counit, h)

    def perturb_arrow(self, rng, f: Arrow, bounds=None) -> Arrow:
        """Convex mix with an independent random map: stays completely
        positive and subunital but moves the defining equation."""
        other = self.rand_arrow(rng, f.src, f.dst)
        t = 0.2 + 0.6 * rng.random()
        return Arrow(f.src, f.dst, (1 - t) * f.data + t * other.data)

    # ---- serialization ----

    def object_to_json(self, X):
        return list(X.block_dims)

    def pred_to_json(self, X, p):
        return [[[[round(z.real, 12), round(z.imag, 12)] for z in row]
                 for row in np.asarray(b)] for b in p]

    def arrow_to_json(self, f: Arrow):
        return [[[round(complex(z).real, 12), round(complex(z).imag, 12)]
                 for z in row] for row in np.asarray(f.data)]
