"""Linear chains: vector spaces over a prime field with total linear maps,
and finite-dimensional complex inner-product spaces.

Predicates are subspaces and substitution is preimage.  The quotient
carrier is concrete: coordinates with respect to a complement basis (a
deterministic echelon complement over F_p, the orthogonal complement over
the complex numbers), so carrier equality is a real object-level question.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .core import (
    Arrow,
    ChainInstance,
    ComprehensionResult,
    HomConditionError,
    QuotientResult,
    UnsupportedError,
    ValidationError,
)
from . import vnlinalg as la

# ---------------------------------------------------------------------------
# F_p machinery: vectors are int tuples, matrices are tuples of row tuples.
# ---------------------------------------------------------------------------


def _inv_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def rref(rows, width: int, p: int):
    """Reduced row echelon form over F_p: returns (rows, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] % p), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = _inv_mod(mat[r][c] % p, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] % p:
                f = mat[i][c] % p
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def mat_mul(a, b, p: int, width: int | None = None):
    """Product of F_p matrices given as row tuples.

    A zero-row ``b`` carries no column count, so a caller composing
    through a 0-dimensional space must pass the result ``width``.
    """
    if a and b:
        assert len(a[0]) == len(b)
    if b:
        width = len(b[0])
    elif width is None:
        width = 0
    rows = []
    for i in range(len(a)):
        rows.append(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) % p
                          for j in range(width)))
    return tuple(rows)


def mat_vec(a, v, p: int):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) % p for row in a)


def fp_kernel(mat, width: int, p: int):
    """RREF basis of the null space of an F_p matrix."""
    red, pivots = rref(mat, width, p)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for c in free:
        v = [0] * width
        v[c] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][c]) % p
        basis.append(tuple(v))
    return rref(basis, width, p)[0]


@dataclass(frozen=True)
class FpSpace:
    """F_p^dim for a prime modulus p."""

    p: int
    dim: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % k == 0 for k in range(2, self.p)):
            raise ValidationError(f"modulus {self.p} is not prime")
        if self.dim < 0:
            raise ValidationError("dimension must be a natural number")

    def __repr__(self):
        return f"F{self.p}^{self.dim}"


@dataclass(frozen=True)
class FpSubspace:
    """Subspace given by its reduced-echelon basis rows."""

    space: FpSpace
    rows: tuple

    def __post_init__(self):
        red, pivots = rref(self.rows, self.space.dim, self.space.p)
        if len(red) != len(self.rows) or red != tuple(tuple(r) for r in self.rows):
            raise ValidationError("basis rows must be a reduced echelon form")
        object.__setattr__(self, "pivots", pivots)

    @property
    def rank(self) -> int:
        return len(self.rows)


def fp_span(space: FpSpace, vectors) -> FpSubspace:
    return FpSubspace(space, rref(vectors, space.dim, space.p)[0])


def _complement_rows(P: FpSubspace):
    """Standard basis vectors at the non-pivot coordinates: together with
    P's echelon rows they form a basis of the whole space."""
    d = P.space.dim
    out = []
    for c in range(d):
        if c not in P.pivots:
            v = [0] * d
            v[c] = 1
            out.append(tuple(v))
    return tuple(out)


@lru_cache(maxsize=None)
def _coords_matrix(P: FpSubspace):
    """Matrix of the quotient map: coordinates with respect to the
    complement basis, modulo P.  Shape (dim - rank) x dim.

    Cached: the inversion shows up on every substitution along a reused
    predicate, and subspaces are immutable."""
    space = P.space
    p, d = space.p, space.dim
    basis = list(P.rows) + list(_complement_rows(P))
    # Invert the change-of-basis matrix whose columns are the basis vectors.
    cols = tuple(tuple(basis[j][i] for j in range(d)) for i in range(d))
    aug = [list(cols[i]) + [1 if j == i else 0 for j in range(d)] for i in range(d)]
    red, piv = rref(aug, 2 * d, p)
    if len(piv) < d or piv[:d] != tuple(range(d)):
        raise ValidationError("basis inversion failed")
    inv = tuple(tuple(red[i][d:]) for i in range(d))
    return inv[P.rank:]


class FpChain(ChainInstance):
    """Vector spaces over a prime field with total linear maps; arrows
    store the matrix (rows x columns = target dim x source dim)."""

    name = "fp"
    description = "prime-field vector spaces and linear maps"
    exact = True
    all_sharp = True
    has_ortho = False
    has_instrument = False

    def _check_matrix(self, X: FpSpace, Y: FpSpace, mat) -> None:
        if X.p != Y.p:
            raise ValidationError("field moduli differ")
        if len(mat) != Y.dim or any(len(r) != X.dim for r in mat):
            raise ValidationError(f"matrix shape must be {Y.dim} x {X.dim}")
        for row in mat:
            for x in row:
                if not isinstance(x, int) or not 0 <= x < X.p:
                    raise ValidationError(f"entry {x!r} not a reduced residue")

    def arrow(self, X, Y, mat) -> Arrow:
        mat = tuple(tuple(r) for r in mat)
        self._check_matrix(X, Y, mat)
        return Arrow(X, Y, mat)

    def identity(self, X) -> Arrow:
        mat = tuple(tuple(1 if i == j else 0 for j in range(X.dim))
                    for i in range(X.dim))
        return Arrow(X, X, mat)

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        self.check_composable(g, f)
        return Arrow(f.src, g.dst,
                     mat_mul(g.data, f.data, f.src.p, width=f.src.dim))

    def map_residual(self, f: Arrow, g: Arrow) -> float:
        same = f.src == g.src and f.dst == g.dst and f.data == g.data
        return 0.0 if same else 1.0

    def objects_equal(self, A, B) -> bool:
        return A == B

    # ---- fibre ----

    def top(self, X: FpSpace) -> FpSubspace:
        rows = tuple(tuple(1 if i == j else 0 for j in range(X.dim))
                     for i in range(X.dim))
        return FpSubspace(X, rows)

    def bottom(self, X: FpSpace) -> FpSubspace:
        return FpSubspace(X, ())

    def pred_leq(self, X, p: FpSubspace, q: FpSubspace) -> bool:
        joined = rref(q.rows + p.rows, X.dim, X.p)[0]
        return joined == q.rows

    def pred_residual(self, X, p, q) -> float:
        return 0.0 if p.rows == q.rows else 1.0

    def subst(self, f: Arrow, q: FpSubspace) -> FpSubspace:
        proj = _coords_matrix(q)
        comp = mat_mul(proj, f.data, f.src.p)
        return FpSubspace(f.src, fp_kernel(comp, f.src.dim, f.src.p))

    # ---- quotient / comprehension ----

    def quotient(self, X, p: FpSubspace) -> QuotientResult:
        obj = FpSpace(X.p, X.dim - p.rank)
        return QuotientResult(obj, Arrow(X, obj, _coords_matrix(p)))

    def comprehension(self, X, p: FpSubspace) -> ComprehensionResult:
        obj = FpSpace(X.p, p.rank)
        mat = tuple(tuple(p.rows[j][i] for j in range(p.rank))
                    for i in range(X.dim))
        return ComprehensionResult(obj, Arrow(obj, X, mat))

    def transpose_quotient(self, X, p, f: Arrow) -> Arrow:
        for row in p.rows:
            if any(mat_vec(f.data, row, X.p)):
                raise HomConditionError(f"fp: {row!r} is not in the kernel")
        comp = _complement_rows(p)
        cols = tuple(mat_vec(f.data, v, X.p) for v in comp)
        mat = tuple(tuple(cols[j][i] for j in range(len(comp)))
                    for i in range(f.dst.dim))
        return Arrow(FpSpace(X.p, X.dim - p.rank), f.dst, mat)

    def transpose_comprehension(self, X, p, f: Arrow) -> Arrow:
        proj = _coords_matrix(p)
        if any(any(row) for row in mat_mul(proj, f.data, X.p)):
            raise HomConditionError("fp: image is not inside the subspace")
        # Echelon basis coordinates can be read off at the pivot columns.
        mat = tuple(f.data[c] for c in p.pivots)
        return Arrow(f.src, FpSpace(X.p, p.rank), mat)

    # ---- sampling and enumeration ----

    def rand_object(self, rng, bounds, like=None) -> FpSpace:
        p = like.p if like is not None else rng.choice(bounds.get("fields", (2, 3)))
        return FpSpace(p, rng.randint(0, bounds.get("max_dim", 3)))

    def rand_pred(self, rng, X, bounds) -> FpSubspace:
        k = rng.randint(0, X.dim)
        vecs = [tuple(rng.randrange(X.p) for _ in range(X.dim)) for _ in range(k)]
        return fp_span(X, vecs)

    def rand_arrow(self, rng, X, Y, bounds) -> Arrow:
        mat = tuple(tuple(rng.randrange(X.p) for _ in range(X.dim))
                    for _ in range(Y.dim))
        return Arrow(X, Y, mat)

    def rand_quotient_hom(self, rng, X, p, Y, bounds) -> Arrow:
        proj = _coords_matrix(p)
        free = X.dim - p.rank
        a = tuple(tuple(rng.randrange(X.p) for _ in range(free))
                  for _ in range(Y.dim))
        return Arrow(X, Y, mat_mul(a, proj, X.p, width=X.dim))

    def rand_comprehension_hom(self, rng, X, p, Y, bounds) -> Arrow:
        inc = self.comprehension(X, p).counit.data
        a = tuple(tuple(rng.randrange(X.p) for _ in range(Y.dim))
                  for _ in range(p.rank))
        return Arrow(Y, X, mat_mul(inc, a, X.p, width=Y.dim))

    def perturb_arrow(self, rng, f: Arrow, bounds) -> Arrow:
        if f.src.dim == 0 or f.dst.dim == 0:
            return f
        i = rng.randrange(f.dst.dim)
        j = rng.randrange(f.src.dim)
        mat = [list(r) for r in f.data]
        mat[i][j] = (mat[i][j] + rng.randrange(1, f.src.p)) % f.src.p
        return Arrow(f.src, f.dst, tuple(tuple(r) for r in mat))

    def iter_objects(self, bounds):
        for p in bounds.get("fields", (2, 3)):
            for d in range(bounds.get("max_dim", 2) + 1):
                yield FpSpace(p, d)

    def comparable_objects(self, X, Y) -> bool:
        return X.p == Y.p

    def count_arrows(self, X, Y) -> int:
        return X.p ** (X.dim * Y.dim)

    def iter_arrows(self, X, Y):
        entries = X.dim * Y.dim
        for combo in product(range(X.p), repeat=entries):
            mat = tuple(tuple(combo[i * X.dim:(i + 1) * X.dim])
                        for i in range(Y.dim))
            yield Arrow(X, Y, mat)

    def iter_preds(self, X):
        """All subspaces, via deduplicated spans of vector subsets."""
        vecs = [v for v in product(range(X.p), repeat=X.dim) if any(v)]
        seen = set()
        for k in range(0, X.dim + 1):
            for chosen in combinations(vecs, k):
                rows = rref(chosen, X.dim, X.p)[0]
                if rows not in seen:
                    seen.add(rows)
                    yield FpSubspace(X, rows)

    # ---- serialization ----

    def object_to_json(self, X):
        return {"field": X.p, "dim": X.dim}

    def pred_to_json(self, X, p: FpSubspace):
        return [list(r) for r in p.rows]

    def arrow_to_json(self, f: Arrow):
        return [list(r) for r in f.data]


# ---------------------------------------------------------------------------
# Complex inner-product spaces.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbSpace:
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValidationError("dimension must be a natural number")

    def __repr__(self):
        return f"C^{self.dim}"


class Subspace:
    """Closed subspace of C^dim, held as a canonical orthonormal basis:
    the Gram-Schmidt sweep of its projection matrix's columns.  Two
    descriptions of the same span produce the same basis up to numerical
    noise far below the working tolerance."""

    __slots__ = ("space", "basis")

    def __init__(self, space: HilbSpace, columns: np.ndarray):
        columns = np.asarray(columns, dtype=complex)
        if columns.size == 0:
            columns = columns.reshape(space.dim, 0)
        else:
            columns = columns.reshape(space.dim, -1)
        first = la.gram_schmidt_columns(columns)
        proj = first @ la.dagger(first)
        self.space = space
        self.basis = la.gram_schmidt_columns(proj)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ la.dagger(self.basis)

    def __repr__(self):
        return f"Subspace(dim {self.rank} of C^{self.space.dim})"


class HilbChain(ChainInstance):
    """Finite-dimensional complex inner-product spaces with linear maps;
    quotient by a subspace is its orthocomplement."""

    name = "hilb"
    description = "complex inner-product spaces and linear maps"
    exact = False
    all_sharp = True
    has_ortho = True
    has_instrument = False
    eq_tol = 1e-9
    hom_tol = 1e-6

    def arrow(self, X: HilbSpace, Y: HilbSpace, mat) -> Arrow:
        mat = np.asarray(mat, dtype=complex).reshape(Y.dim, X.dim)
        return Arrow(X, Y, mat)

    def identity(self, X) -> Arrow:
        return Arrow(X, X, np.eye(X.dim, dtype=complex))

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        self.check_composable(g, f)
        return Arrow(f.src, g.dst, g.data @ f.data)

    def map_residual(self, f: Arrow, g: Arrow) -> float:
        if f.src != g.src or f.dst != g.dst:
            return 1.0
        return la.max_abs(f.data - g.data)

    def objects_equal(self, A, B) -> bool:
        return A == B

    # ---- fibre ----

    def top(self, X) -> Subspace:
        return Subspace(X, np.eye(X.dim, dtype=complex))

    def bottom(self, X) -> Subspace:
        return Subspace(X, np.zeros((X.dim, 0), dtype=complex))

    def pred_leq(self, X, p: Subspace, q: Subspace) -> bool:
        return la.max_abs(q.projector() @ p.basis - p.basis) <= self.eq_tol

    def pred_residual(self, X, p, q) -> float:
        return la.max_abs(p.projector() - q.projector())

    def ortho(self, X, p: Subspace) -> Subspace:
        return Subspace(X, la.orthonormal_complement(p.basis, X.dim))

    def subst(self, f: Arrow, q: Subspace) -> Subspace:
        """Preimage: kernel of (project off q) after f."""
        off = np.eye(f.dst.dim, dtype=complex) - q.projector()
        return Subspace(f.src, la.kernel_basis(off @ f.data))

    # ---- quotient / comprehension ----

    def quotient(self, X, p: Subspace) -> QuotientResult:
        w = la.orthonormal_complement(p.basis, X.dim)
        obj = HilbSpace(w.shape[1])
        return QuotientResult(obj, Arrow(X, obj, la.dagger(w)))

    def comprehension(self, X, p: Subspace) -> ComprehensionResult:
        obj = HilbSpace(p.rank)
        return ComprehensionResult(obj, Arrow(obj, X, p.basis.copy()))

    def transpose_quotient(self, X, p, f: Arrow) -> Arrow:
        if p.rank and la.max_abs(f.data @ p.basis) > self.hom_tol:
            raise HomConditionError("hilb: subspace is not inside the kernel")
        w = la.orthonormal_complement(p.basis, X.dim)
        return Arrow(HilbSpace(w.shape[1]), f.dst, f.data @ w)

    def transpose_comprehension(self, X, p, f: Arrow) -> Arrow:
        off = np.eye(X.dim, dtype=complex) - p.projector()
        if la.max_abs(off @ f.data) > self.hom_tol:
            raise HomConditionError("hilb: image is not inside the subspace")
        return Arrow(f.src, HilbSpace(p.rank), la.dagger(p.basis) @ f.data)

    # ---- orthogonal decomposition (the quotient-side structure) ----

    def decompose_vector(self, X, p: Subspace, v):
        """Split v into its components inside p and inside the complement."""
        v = np.asarray(v, dtype=complex).reshape(X.dim)
        inside = p.projector() @ v
        return inside, v - inside

    def assert_closed_form(self, X, p: Subspace) -> Arrow:
        return Arrow(X, X, p.projector())

    # ---- sampling ----

    def _rand_complex(self, rng, rows, cols) -> np.ndarray:
        vals = [complex(rng.gauss(0, 1), rng.gauss(0, 1))
                for _ in range(rows * cols)]
        return np.array(vals, dtype=complex).reshape(rows, cols)

    def rand_object(self, rng, bounds, like=None) -> HilbSpace:
        return HilbSpace(rng.randint(1, bounds.get("max_dim", 4)))

    def rand_pred(self, rng, X, bounds) -> Subspace:
        k = rng.randint(0, X.dim)
        return Subspace(X, self._rand_complex(rng, X.dim, k))

    def rand_arrow(self, rng, X, Y, bounds) -> Arrow:
        return Arrow(X, Y, self._rand_complex(rng, Y.dim, X.dim))

    def rand_quotient_hom(self, rng, X, p, Y, bounds) -> Arrow:
        w = la.orthonormal_complement(p.basis, X.dim)
        a = self._rand_complex(rng, Y.dim, w.shape[1])
        return Arrow(X, Y, a @ la.dagger(w))

    def rand_comprehension_hom(self, rng, X, p, Y, bounds) -> Arrow:
        a = self._rand_complex(rng, p.rank, Y.dim)
        return Arrow(Y, X, p.basis @ a)

    def perturb_arrow(self, rng, f: Arrow, bounds) -> Arrow:
        if f.src.dim == 0 or f.dst.dim == 0:
            return f
        noise = np.zeros((f.dst.dim, f.src.dim), dtype=complex)
        noise[rng.randrange(f.dst.dim), rng.randrange(f.src.dim)] = (
            0.5 + rng.random())
        return Arrow(f.src, f.dst, f.data + noise)

    def coincidence_residual(self, X, p, q, c) -> float:
        # The two carriers are plain coordinate spaces; agreement means
        # the collapse basis and the inclusion basis are the same columns.
        if q.unit.data.shape != la.dagger(c.counit.data).shape:
            return 1.0
        if q.unit.data.size == 0:
            return 0.0
        return la.max_abs(q.unit.data - la.dagger(c.counit.data))

    # ---- serialization ----

    def object_to_json(self, X):
        return {"dim": X.dim}

    def pred_to_json(self, X, p: Subspace):
        return [[[round(z.real, 12), round(z.imag, 12)] for z in row]
                for row in p.basis]

    def arrow_to_json(self, f: Arrow):
        return [[[round(complex(z).real, 12), round(complex(z).imag, 12)]
                 for z in row] for row in np.asarray(f.data)]
