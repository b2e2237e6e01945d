"""Ring chain: finite products of modular-integer rings, idempotents as
predicates.

Chain arrows point opposite to the underlying ring maps: an arrow X -> Y
carries a table sending each element of Y to an element of X, and that
table must be additive and multiplicative (unit preservation is not
required, only that the image of 1 is idempotent, which multiplicativity
already forces).

Corner rings (ideals generated by an idempotent) serve as both quotient
and comprehension carriers; their elements are elements of the parent, so
the coincidence of the two carriers is literal object identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .core import (
    Arrow,
    ChainInstance,
    ComprehensionResult,
    HomConditionError,
    QuotientResult,
    ValidationError,
    atom_key,
    atom_to_json,
)


class FiniteRing:
    """Protocol for the concrete ring classes below: commutative, unital,
    elements hashable and totally ordered by atom_key."""

    zero: object
    one: object

    def elements(self) -> tuple:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def nmul(self, n: int, a):
        acc = self.zero
        for _ in range(n):
            acc = self.add(acc, a)
        return acc

    def __len__(self) -> int:
        return len(self.elements())


@dataclass(frozen=True)
class ZProductRing(FiniteRing):
    """Product of Z_m factors; elements are residue tuples.  An empty
    moduli tuple gives the zero ring, whose only element is ()."""

    moduli: tuple

    _elts: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for m in self.moduli:
            if not isinstance(m, int) or m < 2:
                raise ValidationError(f"modulus {m!r} must be an int >= 2")
        elts = tuple(sorted(product(*(range(m) for m in self.moduli)), key=atom_key))
        object.__setattr__(self, "_elts", elts)

    @property
    def zero(self):
        return tuple(0 for _ in self.moduli)

    @property
    def one(self):
        return tuple(1 if m > 1 else 0 for m in self.moduli)

    def elements(self):
        return self._elts

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def mul(self, a, b):
        return tuple((x * y) % m for x, y, m in zip(a, b, self.moduli))

    def __repr__(self):
        if not self.moduli:
            return "Z0"
        return " x ".join(f"Z{m}" for m in self.moduli)


@dataclass(frozen=True)
class IdealRing(FiniteRing):
    """The ideal e*R of a parent ring, a unital ring with unit e.
    Elements are parent elements, so inclusion into the parent is the
    identity on values."""

    parent: FiniteRing
    unit: object

    _elts: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        R, e = self.parent, self.unit
        if R.mul(e, e) != e:
            raise ValidationError(f"{e!r} is not idempotent in {R!r}")
        elts = tuple(sorted({R.mul(e, x) for x in R.elements()}, key=atom_key))
        object.__setattr__(self, "_elts", elts)

    @property
    def zero(self):
        return self.parent.zero

    @property
    def one(self):
        return self.unit

    def elements(self):
        return self._elts

    def add(self, a, b):
        return self.parent.add(a, b)

    def neg(self, a):
        return self.parent.neg(a)

    def mul(self, a, b):
        return self.parent.mul(a, b)

    def __repr__(self):
        return f"({self.unit!r}){self.parent!r}"


@dataclass(frozen=True)
class PairRing(FiniteRing):
    """Binary product of two rings; elements are (left, right) pairs."""

    left: FiniteRing
    right: FiniteRing

    _elts: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elts = tuple(sorted(product(self.left.elements(), self.right.elements()),
                            key=atom_key))
        object.__setattr__(self, "_elts", elts)

    @property
    def zero(self):
        return (self.left.zero, self.right.zero)

    @property
    def one(self):
        return (self.left.one, self.right.one)

    def elements(self):
        return self._elts

    def add(self, a, b):
        return (self.left.add(a[0], b[0]), self.right.add(a[1], b[1]))

    def neg(self, a):
        return (self.left.neg(a[0]), self.right.neg(a[1]))

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def __repr__(self):
        return f"({self.left!r}) x ({self.right!r})"


def idempotents(R: FiniteRing) -> tuple:
    return tuple(e for e in R.elements() if R.mul(e, e) == e)


def canonical_iso(R: FiniteRing):
    """Identify R with a product of Z_m (m >= 2): returns the normal form
    and the two translation dicts (element -> residue tuple and back)."""
    if isinstance(R, ZProductRing):
        ident = {x: x for x in R.elements()}
        return R, dict(ident), dict(ident)
    if isinstance(R, PairRing):
        lnf, lto, lfrom = canonical_iso(R.left)
        rnf, rto, rfrom = canonical_iso(R.right)
        nf = ZProductRing(lnf.moduli + rnf.moduli)
        to_nf = {(a, b): lto[a] + rto[b]
                 for a in R.left.elements() for b in R.right.elements()}
        from_nf = {v: k for k, v in to_nf.items()}
        return nf, to_nf, from_nf
    if isinstance(R, IdealRing):
        pnf, pto, pfrom = canonical_iso(R.parent)
        u = pto[R.unit]
        orders = [m // gcd(c, m) for c, m in zip(u, pnf.moduli)]
        kept = [i for i, d in enumerate(orders) if d > 1]
        nf = ZProductRing(tuple(orders[i] for i in kept))
        to_nf, from_nf = {}, {}
        for x in R.elements():
            coords = pto[x]
            t = tuple(coords[i] % orders[i] for i in kept)
            to_nf[x] = t
            from_nf[t] = x
        return nf, to_nf, from_nf
    raise ValidationError(f"unknown ring class {type(R).__name__}")


def canonical_moduli(R: FiniteRing) -> tuple:
    return canonical_iso(R)[0].moduli


def enumerate_hom_tables(Y: FiniteRing, X: FiniteRing):
    """All additive multiplicative maps Y -> X (subunital by nature),
    yielded as full element dicts.

    Writing Y as a product of Z_n factors, such a map is determined by an
    assignment of pairwise orthogonal idempotents c_j of X with n_j*c_j = 0,
    one per factor; the map sends a residue tuple to sum_j c_j * y_j."""
    nf, to_nf, _ = canonical_iso(Y)
    idems = idempotents(X)
    one = X.one

    def assign(j, remaining, chosen):
        if j == len(nf.moduli):
            yield tuple(chosen)
            return
        n_j = nf.moduli[j]
        for c in idems:
            if X.mul(c, remaining) != c:
                continue
            if X.nmul(n_j, c) != X.zero:
                continue
            yield from assign(j + 1, X.sub(remaining, c), chosen + [c])

    for cs in assign(0, one, []):
        table = {}
        for y in Y.elements():
            t = to_nf[y]
            acc = X.zero
            for c, r in zip(cs, t):
                acc = X.add(acc, X.nmul(r, c))
            table[y] = acc
        yield table


def rings_up_to(max_order: int):
    """All products of Z_m (canonical non-decreasing moduli) of order at
    most max_order, the zero ring included."""
    out = [()]

    def extend(prefix, prod, low):
        m = low
        while prod * m <= max_order:
            cur = prefix + (m,)
            out.append(cur)
            extend(cur, prod * m, m)
            m += 1

    extend((), 1, 2)
    return [ZProductRing(t) for t in sorted(out)]


@dataclass(frozen=True, eq=False)
class Decomposition:
    """The splitting R ~ eR x (1-e)R induced by an idempotent e."""

    pair: PairRing
    split: Arrow  # chain pair -> R; underlying x |-> (ex, (1-e)x)
    merge: Arrow  # chain R -> pair; underlying (a, b) |-> a + b


class RingChain(ChainInstance):
    """Products of modular-integer rings with reversed subunital ring maps."""

    name = "ring"
    description = "finite commutative rings, arrows opposite to ring maps"
    exact = True
    all_sharp = True

    # ---- category ----

    def _check_table(self, X: FiniteRing, Y: FiniteRing, table: dict) -> None:
        ys = Y.elements()
        if set(table) != set(ys):
            raise ValidationError("table keys must be exactly the target ring")
        xs = set(X.elements())
        for y, v in table.items():
            if v not in xs:
                raise ValidationError(f"value {v!r} for {y!r} not in source ring")
        for a in ys:
            for b in ys:
                if table[Y.add(a, b)] != X.add(table[a], table[b]):
                    raise ValidationError(f"table not additive at {a!r}, {b!r}")
                if table[Y.mul(a, b)] != X.mul(table[a], table[b]):
                    raise ValidationError(f"table not multiplicative at {a!r}, {b!r}")

    def arrow(self, X, Y, table: dict) -> Arrow:
        self._check_table(X, Y, table)
        return Arrow(X, Y, dict(table))

    def identity(self, X) -> Arrow:
        return Arrow(X, X, {x: x for x in X.elements()})

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        self.check_composable(g, f)
        return Arrow(f.src, g.dst, {z: f.data[g.data[z]] for z in g.dst.elements()})

    def map_residual(self, f: Arrow, g: Arrow) -> float:
        same = f.src == g.src and f.dst == g.dst and f.data == g.data
        return 0.0 if same else 1.0

    def objects_equal(self, A, B) -> bool:
        return A == B

    # ---- fibre: idempotents ----

    def top(self, X):
        return X.one

    def bottom(self, X):
        return X.zero

    def pred_leq(self, X, p, q) -> bool:
        return X.mul(p, q) == p

    def pred_residual(self, X, p, q) -> float:
        return 0.0 if p == q else 1.0

    def ortho(self, X, p):
        return X.sub(X.one, p)

    def iter_preds(self, X):
        return iter(idempotents(X))

    def subst(self, f: Arrow, q):
        X, Y = f.src, f.dst
        return X.add(f.data[q], X.sub(X.one, f.data[Y.one]))

    # ---- quotient / comprehension ----

    def quotient(self, X, p) -> QuotientResult:
        obj = IdealRing(X, self.ortho(X, p))
        unit = Arrow(X, obj, {q: q for q in obj.elements()})
        return QuotientResult(obj, unit)

    def comprehension(self, X, p) -> ComprehensionResult:
        obj = IdealRing(X, p)
        counit = Arrow(obj, X, {x: X.mul(p, x) for x in X.elements()})
        return ComprehensionResult(obj, counit)

    def transpose_quotient(self, X, p, f: Arrow) -> Arrow:
        img_one = f.data[f.dst.one]
        if X.mul(p, img_one) != X.zero:
            raise HomConditionError(
                f"ring: image of 1 is {img_one!r}, not orthogonal to {p!r}"
            )
        obj = IdealRing(X, self.ortho(X, p))
        return Arrow(obj, f.dst, dict(f.data))

    def transpose_comprehension(self, X, p, f: Arrow) -> Arrow:
        img_one = f.data[X.one]
        if f.data[p] != img_one:
            raise HomConditionError(
                f"ring: {p!r} and 1 have distinct images {f.data[p]!r}, {img_one!r}"
            )
        obj = IdealRing(X, p)
        return Arrow(f.src, obj, {c: f.data[c] for c in obj.elements()})

    # ---- assert / instrument / decomposition ----

    def assert_closed_form(self, X, p) -> Arrow:
        return Arrow(X, X, {x: X.mul(p, x) for x in X.elements()})

    def instrument_closed_form(self, X, p) -> Arrow:
        dd = PairRing(X, X)
        q = self.ortho(X, p)
        table = {(a, b): X.add(X.mul(p, a), X.mul(q, b)) for a, b in dd.elements()}
        return Arrow(X, dd, table)

    def instrument_combine(self, X, branch_pass: Arrow, branch_fail: Arrow) -> Arrow:
        dd = PairRing(X, X)
        table = {(a, b): X.add(branch_pass.data[a], branch_fail.data[b])
                 for a, b in dd.elements()}
        return Arrow(X, dd, table)

    def codiagonal(self, X) -> Arrow:
        dd = PairRing(X, X)
        return Arrow(dd, X, {x: (x, x) for x in X.elements()})

    def decompose(self, X, p) -> Decomposition:
        q = self.ortho(X, p)
        pair = PairRing(IdealRing(X, p), IdealRing(X, q))
        split = Arrow(pair, X, {x: (X.mul(p, x), X.mul(q, x)) for x in X.elements()})
        merge = Arrow(X, pair, {ab: X.add(ab[0], ab[1]) for ab in pair.elements()})
        return Decomposition(pair, split, merge)

    # ---- sampling and enumeration ----

    def __init__(self):
        self._table_cache = {}

    def _hom_tables(self, Y, X) -> list:
        key = (Y, X)
        if key not in self._table_cache:
            self._table_cache[key] = list(enumerate_hom_tables(Y, X))
        return self._table_cache[key]

    def rand_object(self, rng, bounds, like=None) -> FiniteRing:
        max_order = bounds.get("max_order", 24)
        moduli = []
        prod_ = 1
        while True:
            opts = [m for m in range(2, 10) if prod_ * m <= max_order]
            if not opts or (moduli and rng.random() < 0.5):
                break
            m = rng.choice(opts)
            moduli.append(m)
            prod_ *= m
        return ZProductRing(tuple(sorted(moduli)))

    def rand_pred(self, rng, X, bounds):
        return rng.choice(list(idempotents(X)))

    def rand_arrow(self, rng, X, Y, bounds) -> Arrow:
        return Arrow(X, Y, rng.choice(self._hom_tables(Y, X)))

    def rand_quotient_hom(self, rng, X, p, Y, bounds) -> Arrow:
        corner = IdealRing(X, self.ortho(X, p))
        return Arrow(X, Y, rng.choice(self._hom_tables(Y, corner)))

    def rand_comprehension_hom(self, rng, X, p, Y, bounds) -> Arrow:
        corner = IdealRing(X, p)
        g = rng.choice(self._hom_tables(corner, Y))
        return Arrow(Y, X, {x: g[X.mul(p, x)] for x in X.elements()})

    def perturb_arrow(self, rng, f: Arrow, bounds) -> Arrow:
        # Perturb inside the hom set: arbitrary table tweaks would leave
        # the category entirely.
        tables = [t for t in self._hom_tables(f.dst, f.src) if t != f.data]
        if not tables:
            return f
        return Arrow(f.src, f.dst, rng.choice(tables))

    def count_arrows(self, X, Y) -> int:
        return len(self._hom_tables(Y, X))

    def iter_arrows(self, X, Y):
        for table in self._hom_tables(Y, X):
            yield Arrow(X, Y, table)

    def iter_objects(self, bounds):
        return iter(rings_up_to(bounds.get("max_order", 12)))

    # ---- serialization ----

    def object_to_json(self, X):
        if isinstance(X, ZProductRing):
            return list(X.moduli)
        if isinstance(X, IdealRing):
            return {"kind": "ideal", "parent": self.object_to_json(X.parent),
                    "unit": atom_to_json(X.unit)}
        if isinstance(X, PairRing):
            return {"kind": "pair", "left": self.object_to_json(X.left),
                    "right": self.object_to_json(X.right)}
        return repr(X)

    def pred_to_json(self, X, p):
        return atom_to_json(p)

    def arrow_to_json(self, f: Arrow):
        return [[atom_to_json(y), atom_to_json(f.data[y])]
                for y in sorted(f.dst.elements(), key=atom_key)]
