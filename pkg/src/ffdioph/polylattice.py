"""Exact geometry of numbers over Z = F_q[X].

Lattices are given by a basis whose rows are the lattice vectors (exact
Laurent polynomials).  Reduction scales everything by X^s into F_q[X] and
brings the matrix into weak Popov form; the row degrees of that form are the
successive minima for the max-norm, and their product is |det|.
"""
import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import DimensionMismatch, InsufficientPrecision, SingularBasis
from .field_arith import Poly
from .laurent import LaurentBall, NormExp, norm_max


def _ball(v, field):
    if isinstance(v, LaurentBall):
        return v
    if isinstance(v, Poly):
        return LaurentBall.from_poly(v)
    if isinstance(v, str):
        return LaurentBall.parse(field, v)
    return LaurentBall.const(field, field.from_int(v))


class LatticeBasis:
    """The Z-span of ``rows`` inside K^m."""

    def __init__(self, field, rows):
        self.field = field
        self.rows = tuple(tuple(_ball(v, field) for v in r) for r in rows)
        self.m = len(self.rows)
        if any(len(r) != self.m for r in self.rows):
            raise DimensionMismatch("a lattice basis must be square")

    @classmethod
    def identity(cls, field, m):
        return cls(field, [[1 if i == j else 0 for j in range(m)] for i in range(m)])

    @classmethod
    def diagonal(cls, field, exps):
        """diag(X^e_1, ..., X^e_m) Z^m."""
        m = len(exps)
        return cls(field, [[LaurentBall.monomial(field, e) if i == j else 0
                            for j in range(m)] for i, e in enumerate(exps)])

    @classmethod
    def parse(cls, field, text):
        """Rows separated by ``;``, entries by ``,``."""
        return cls(field, [[s.strip() for s in r.split(",")] for r in text.split(";")])

    @property
    def exact(self):
        return all(v.exact for r in self.rows for v in r)

    def to_record(self):
        return [[str(v) for v in r] for r in self.rows]

    def __repr__(self):
        return f"LatticeBasis({self.to_record()})"

    def scaled(self):
        """(s, rows as Poly lists) with entries multiplied by X^s."""
        if not self.exact:
            raise InsufficientPrecision("lattice operations need exact entries")
        return _scale(self.field, self.rows)


def _scale(field, rows):
    s = max([0] + [v.prec for r in rows for v in r if v.coeffs])
    out = [[v.shift(s).polynomial_part() for v in r] for r in rows]
    return s, out


def _unscale(field, prows, s):
    return tuple(tuple(LaurentBall.from_poly(c).shift(-s) for c in r) for r in prows)


@dataclass(frozen=True)
class ReducedBasis:
    rows: tuple
    minima: tuple
    row_norms: tuple = dc_field(default=())

    @property
    def delta(self):
        return self.minima[0]


def _row_deg(row):
    return max(c.deg for c in row)


def _leading_pos(row):
    d = _row_deg(row)
    for j in range(len(row) - 1, -1, -1):
        if row[j].deg == d:
            return j
    return None


def weak_popov(prows):
    """Bring a nonsingular square polynomial matrix into weak Popov form.

    Rows with equal leading position are cancelled against each other
    (Mulders-Storjohann simple transformations).  Works in place on a copy
    and returns the new rows.
    """
    rows = [list(r) for r in prows]
    field = rows[0][0].field if rows else None
    for r in rows:
        if not any(r):
            raise SingularBasis("zero row in basis")
    while True:
        by_pos = {}
        clash = None
        for i, r in enumerate(rows):
            lp = _leading_pos(r)
            if lp in by_pos:
                clash = (by_pos[lp], i, lp)
                break
            by_pos[lp] = i
        if clash is None:
            return rows
        i, j, lp = clash
        di, dj = rows[i][lp].deg, rows[j][lp].deg
        if di < dj:
            i, j, di, dj = j, i, dj, di
        c = field.neg(field.div(rows[i][lp].lc, rows[j][lp].lc))
        piv = rows[j]
        rows[i] = [a + b.shift(di - dj).scale(c) for a, b in zip(rows[i], piv)]
        if not any(rows[i]):
            raise SingularBasis("rows are linearly dependent")


def reduce_basis(b):
    s, prows = b.scaled()
    red = weak_popov(prows)
    norms = [NormExp(_row_deg(r) - s) for r in red]
    order = sorted(range(len(red)), key=lambda i: (norms[i].e, i))
    red = [red[i] for i in order]
    norms = tuple(norms[i] for i in order)
    return ReducedBasis(_unscale(b.field, red, s), norms, norms)


def successive_minima(b):
    return list(reduce_basis(b).minima)


def delta(b):
    return reduce_basis(b).minima[0]


def poly_det(mat):
    """Determinant of a square Poly matrix by fraction-free (Bareiss) elimination."""
    n = len(mat)
    if n == 0:
        raise DimensionMismatch("empty matrix")
    field = mat[0][0].field
    a = [list(r) for r in mat]
    sign = 1
    prev = Poly.one(field)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(field)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def laurent_det(rows, field):
    """Exact determinant of a square matrix of exact LaurentBalls."""
    s, prows = _scale(field, rows)
    return LaurentBall.from_poly(poly_det(prows)).shift(-s * len(rows))


def det_norm(b):
    s, prows = b.scaled()
    d = poly_det(prows)
    if not d:
        raise SingularBasis("zero determinant")
    return NormExp(d.deg - s * b.m)


def plucker(vectors, field):
    """{column subset I: the r x r minor of the vectors on I} (exact LaurentBalls)."""
    vectors = [[_ball(v, field) for v in vec] for vec in vectors]
    r = len(vectors)
    m = len(vectors[0])
    s, prows = _scale(field, vectors)
    out = {}
    for cols in itertools.combinations(range(m), r):
        d = poly_det([[row[c] for c in cols] for row in prows])
        out[cols] = LaurentBall.from_poly(d).shift(-s * r)
    return out


def wedge_norm(vectors, field=None):
    """|v_1 ^ ... ^ v_r| = max over r x r minors of their norm (zero if dependent)."""
    vectors = [list(v) for v in vectors]
    if field is None:
        field = vectors[0][0].field
    return norm_max(c.norm() for c in plucker(vectors, field).values())


class Submodule:
    """A submodule of Z^m given by r polynomial row vectors."""

    def __init__(self, field, basis):
        self.field = field
        self.basis = tuple(tuple(_poly(v, field) for v in r) for r in basis)
        self.rank = len(self.basis)
        self.m = len(self.basis[0]) if self.basis else 0
        self._primitive = None

    @classmethod
    def parse(cls, field, text):
        return cls(field, [[s.strip() for s in r.split(",")] for r in text.split(";")])

    @property
    def primitive(self):
        if self._primitive is None:
            self._primitive = is_primitive(self)
        return self._primitive

    def minors(self):
        """Maximal minors as polynomials, keyed by column subset."""
        return _minors(self.basis, self.m)

    def norm(self):
        """|Delta| = norm of the wedge of a basis."""
        return norm_max(NormExp(d.deg) if d else NormExp(None) for d in self.minors().values())

    def key(self):
        return tuple(tuple(c.coeffs for c in r) for r in self.basis)

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return "; ".join(", ".join(str(c) for c in r) for r in self.basis)

    def __repr__(self):
        return f"Submodule({self})"


def _minors(basis, m):
    r = len(basis)
    if r == 1:
        return {(c,): basis[0][c] for c in range(m)}
    if r == 2:
        a, b = basis
        return {(i, j): a[i] * b[j] - a[j] * b[i]
                for i, j in itertools.combinations(range(m), 2)}
    return {cols: poly_det([[row[c] for c in cols] for row in basis])
            for cols in itertools.combinations(range(m), r)}


def _gcd_is_unit(polys):
    g = None
    for p in polys:
        if not p:
            continue
        g = p if g is None else g.gcd(p)
        if g.deg == 0:
            return True
    return False


def _poly(v, field):
    if isinstance(v, Poly):
        return v
    if isinstance(v, str):
        return Poly.parse(field, v)
    if isinstance(v, LaurentBall):
        if not v.exact:
            raise InsufficientPrecision("submodule entries must be exact")
        if v.coeffs and v.prec > 0:
            raise ValueError("submodule entries must be polynomials")
        return v.polynomial_part()
    return Poly.const(field, field.from_int(v))


def is_primitive(d):
    """gcd of the maximal minors is a unit (and the rows are independent)."""
    return _gcd_is_unit(d.minors().values())


def hermite_form(rows):
    """Row Hermite normal form over F_q[X] of independent polynomial rows.

    Pivots are monic and entries above a pivot have smaller degree; the form
    is unique for the module, so it serves as the canonical basis.
    """
    rows = [list(r) for r in rows]
    r = len(rows)
    m = len(rows[0])
    top = 0
    pivots = []
    for c in range(m):
        if top == r:
            break
        while True:
            live = [i for i in range(top, r) if rows[i][c]]
            if not live:
                break
            i0 = min(live, key=lambda i: (rows[i][c].deg, i))
            rows[top], rows[i0] = rows[i0], rows[top]
            done = True
            for i in range(top + 1, r):
                if rows[i][c]:
                    qt = rows[i][c] // rows[top][c]
                    rows[i] = [a - qt * b for a, b in zip(rows[i], rows[top])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if not rows[top][c]:
            continue
        inv = rows[top][c].field.inv(rows[top][c].lc)
        rows[top] = [a.scale(inv) for a in rows[top]]
        for h in range(top):
            if rows[h][c]:
                qt = rows[h][c] // rows[top][c]
                rows[h] = [a - qt * b for a, b in zip(rows[h], rows[top])]
        pivots.append(c)
        top += 1
    if top < r:
        raise SingularBasis("rows are linearly dependent")
    return rows


def _normalized_vectors(field, m, bound):
    """Nonzero vectors with entry degree <= bound, one per F_q^* multiple."""
    polys = [Poly(field, cs) for cs in itertools.product(field.elements(), repeat=bound + 1)]
    for v in itertools.product(polys, repeat=m):
        first = next((c for c in v if c), None)
        if first is not None and first.lc == 1:
            yield v


def _plucker_key(minors):
    vals = list(minors)
    lead = next(c for c in vals if c)
    inv = lead.field.inv(lead.lc)
    return tuple(c.scale(inv).coeffs for c in vals)


@lru_cache(maxsize=None)
def _enumerate(field, m, rank_max, bound):
    out = []
    vecs = list(_normalized_vectors(field, m, bound))
    for r in range(1, min(rank_max, m) + 1):
        if r == m:
            out.append(Submodule(field, [[1 if i == j else 0 for j in range(m)]
                                         for i in range(m)]))
            continue
        seen = set()
        found = []
        for combo in itertools.combinations(vecs, r):
            minors = list(_minors(combo, m).values())
            if not any(minors):
                continue
            key = _plucker_key(minors)
            if key in seen:
                continue
            seen.add(key)
            if _gcd_is_unit(minors):
                found.append(Submodule(field, hermite_form(combo)))
        found.sort(key=lambda s: s.key())
        out.extend(found)
    return tuple(out)


def enumerate_primitive(field, m, rank_max, degree_bound):
    """All primitive submodules of Z^m of rank <= rank_max with a basis of
    entry degree <= degree_bound, each once, in Hermite normal form."""
    if m < 1 or rank_max < 0 or degree_bound < 0:
        return iter(())
    return iter(_enumerate(field, m, rank_max, degree_bound))


def laurent_rank(vectors, field):
    """Rank over K of a list of exact Laurent vectors (fraction-free elimination)."""
    vectors = [[_ball(v, field) for v in vec] for vec in vectors]
    if not vectors:
        return 0
    _, rows = _scale(field, vectors)
    rows = [r for r in rows if any(r)]
    m = len(rows[0]) if rows else 0
    rank = 0
    for c in range(m):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                a = rows[i][c]
                rows[i] = [x * p[c] - a * y for x, y in zip(rows[i], p)]
        rank += 1
    return rank
