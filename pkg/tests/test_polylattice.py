import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import F2, F3, X, random_poly, seeded
from ffdioph.errors import SingularBasis
from ffdioph.field_arith import Poly
from ffdioph.laurent import LaurentBall, NormExp
from ffdioph.polylattice import (LatticeBasis, Submodule, delta, det_norm, enumerate_primitive,
                                 hermite_form, is_primitive, laurent_rank, poly_det, plucker,
                                 reduce_basis, successive_minima, wedge_norm)

x_ = X()
P = lambda s, f=F3: Poly.parse(f, s)
E = NormExp


def test_reduce_examples():
    assert successive_minima(LatticeBasis.identity(F3, 2)) == [E(0), E(0)]
    assert successive_minima(LatticeBasis.diagonal(F3, [1, -1])) == [E(-1), E(1)]
    b = LatticeBasis.parse(F3, "1,X^2;0,1")
    red = reduce_basis(b)
    assert red.minima == (E(0), E(0))
    # the reduced rows are a unimodular change of basis
    assert det_norm(LatticeBasis(F3, red.rows)) == det_norm(b)
    for row in red.rows:
        assert max(v.norm() for v in row) in (E(0),)


def test_delta_examples():
    assert delta(LatticeBasis.identity(F3, 3)) == E(0)
    assert delta(LatticeBasis.diagonal(F3, [1, -1])) == E(-1)
    assert delta(LatticeBasis.diagonal(F3, [2, -1, -1])) == E(-1)


def test_det_norm_examples():
    assert det_norm(LatticeBasis.identity(F3, 2)) == E(0)
    assert det_norm(LatticeBasis.diagonal(F3, [1, -1])) == E(0)
    assert det_norm(LatticeBasis.parse(F3, "X,0;0,1")) == E(1)
    with pytest.raises(SingularBasis):
        det_norm(LatticeBasis.parse(F3, "1,X;X,X^2"))
    with pytest.raises(SingularBasis):
        reduce_basis(LatticeBasis.parse(F3, "1,X;X,X^2"))


def test_wedge_examples():
    one, zero = LaurentBall.const(F3, 1), LaurentBall.zero(F3)
    xb = LaurentBall.from_poly(x_)
    assert wedge_norm([[one, zero], [zero, one]]) == E(0)
    assert wedge_norm([[xb, zero], [one, xb.inv(20)]]) == E(0)
    assert wedge_norm([[one, zero], [xb, one]]) == E(0)
    assert wedge_norm([[one, xb], [xb, xb * xb]]).is_zero


def test_primitive_examples():
    assert not is_primitive(Submodule.parse(F3, "X,0"))
    assert is_primitive(Submodule.parse(F3, "X,1"))
    assert is_primitive(Submodule.parse(F3, "1,0;0,1"))
    assert not is_primitive(Submodule.parse(F3, "1,0;0,X"))


def test_enumerate_examples():
    lines = list(enumerate_primitive(F3, 2, 1, 0))
    assert {str(s) for s in lines} == {"1, 0", "0, 1", "1, 1", "1, 2"}
    full = [s for s in enumerate_primitive(F3, 2, 2, 0) if s.rank == 2]
    assert [str(s) for s in full] == ["1, 0; 0, 1"]


def _linear_divides(field, polys):
    """Some monic linear factor divides every entry."""
    for c in field.elements():
        lin = Poly(field, [c, 1])
        if all(not p or not divmod(p, lin)[1] for p in polys):
            return True
    return False


def test_enumerate_lines_degree_one_count():
    # deg <= 1 entries: non-primitive iff a linear factor divides both
    field = F3
    vals = [Poly(field, cs) for cs in itertools.product(range(3), repeat=2)]
    good = sum(1 for a, b in itertools.product(vals, repeat=2)
               if (a or b) and not _linear_divides(field, [a, b]))
    lines = list(enumerate_primitive(field, 2, 1, 1))
    assert len(lines) == good // (field.k - 1)
    keys = set()
    for s in lines:
        assert s.primitive
        mins = list(s.minors().values())
        lead = next(c for c in mins if c)
        key = tuple(c.scale(field.inv(lead.lc)).coeffs for c in mins)
        assert key not in keys
        keys.add(key)


def test_enumerate_no_duplicate_modules():
    subs = list(enumerate_primitive(F2, 3, 2, 1))
    # two Hermite forms of the same module coincide, so distinct keys mean distinct modules
    assert len({s.key() for s in subs}) == len(subs)
    for s in subs:
        assert s.primitive
        assert hermite_form(s.basis) == [list(r) for r in s.basis]


def _in_module(basis, w):
    """w in the F_q[X]-span of the rows (Cramer's rule on a nonzero maximal minor)."""
    r, m = len(basis), len(w)
    for cols in itertools.combinations(range(m), r):
        d = poly_det([[row[c] for c in cols] for row in basis])
        if d:
            break
    coeffs = []
    for i in range(r):
        rows = [list(row) for row in basis]
        rows[i] = list(w)
        num = poly_det([[row[c] for c in cols] for row in rows])
        qt, rem = divmod(num, d)
        if rem:
            return False
        coeffs.append(qt)
    return all(sum((coeffs[i] * basis[i][j] for i in range(r)), Poly.zero(w[0].field)) == w[j]
               for j in range(m))


def test_primitive_definitional_oracle():
    # Delta primitive iff every w in K Delta cap Z^m lies in Delta (searched over deg <= 2)
    field = F2
    small = [Poly(field, cs) for cs in itertools.product(range(2), repeat=3)]
    rng = seeded(5)
    for _ in range(25):
        basis = [[random_poly(rng, field, 1) for _ in range(3)] for _ in range(2)]
        if laurent_rank(basis, field) < 2:
            continue
        sub = Submodule(field, basis)
        witness = None
        for w in itertools.product(small, repeat=3):
            if any(w) and laurent_rank(basis + [list(w)], field) == 2 and not _in_module(basis, w):
                witness = w
                break
        assert sub.primitive == (witness is None)


def _brute_minima(field, prows, cols, D):
    """Successive minima of Z^m P diag(X^-c) over coefficient vectors of degree <= D."""
    m = len(prows)
    polys = [Poly(field, cs) for cs in itertools.product(range(field.k), repeat=D + 1)]
    found = []
    for a in itertools.product(polys, repeat=m):
        if not any(a):
            continue
        v = [sum((a[i] * prows[i][j] for i in range(m)), Poly.zero(field)) for j in range(m)]
        e = max(v[j].deg - cols[j] for j in range(m) if v[j])
        found.append((e, a))
    found.sort(key=lambda t: t[0])
    chosen, minima = [], []
    for e, a in found:
        if laurent_rank(chosen + [list(a)], field) > len(chosen):
            chosen.append(list(a))
            minima.append(E(e))
            if len(chosen) == m:
                break
    return minima


def _adj_max_deg(prows):
    m = len(prows)
    if m == 1:
        return 0
    best = 0
    for i in range(m):
        for j in range(m):
            sub = [[prows[r][c] for c in range(m) if c != j] for r in range(m) if r != i]
            d = poly_det(sub)
            if d:
                best = max(best, d.deg)
    return best


@pytest.mark.parametrize("field,m,dmax", [(F3, 2, 3), (F2, 2, 3), (F2, 3, 3)])
def test_minima_match_brute_force(field, m, dmax):
    rng = seeded(11 * m + field.k)
    checked = 0
    tries = 0
    while checked < (12 if m == 2 else 6) and tries < 2000:
        tries += 1
        prows = [[random_poly(rng, field, 1) for _ in range(m)] for _ in range(m)]
        det = poly_det(prows)
        if not det:
            continue
        cols = [rng.randint(-1, 1) for _ in range(m)]
        upper = max(prows[i][j].deg - cols[j] for i in range(m) for j in range(m) if prows[i][j])
        # coefficient bound |a| <= |v| |B^-1| for every |v| <= lambda_m <= upper
        D = upper + max(cols) + _adj_max_deg(prows) - det.deg
        if D > dmax:
            continue
        D = max(D, 0)
        b = LatticeBasis(field, [[LaurentBall.from_poly(prows[i][j]).shift(-cols[j])
                                  for j in range(m)] for i in range(m)])
        assert successive_minima(b) == _brute_minima(field, prows, cols, D)
        checked += 1
    assert checked >= 4


def test_product_of_minima_is_det():
    rng = seeded(2)
    n = 0
    for field in (F2, F3):
        for m in (1, 2, 3, 4):
            for _ in range(125):
                rows = [[LaurentBall.from_poly(random_poly(rng, field, 6)).shift(rng.randint(-2, 2))
                         for _ in range(m)] for _ in range(m)]
                b = LatticeBasis(field, rows)
                try:
                    d = det_norm(b)
                except SingularBasis:
                    continue
                red = reduce_basis(b)
                assert sum(e.e for e in red.minima) == d.e
                assert list(red.minima) == sorted(red.minima, key=lambda e: e.e)
                for row, e in zip(red.rows, red.minima):
                    assert max(v.norm().e for v in row if v.coeffs) == e.e
                n += 1
    assert n >= 850


def _unimodular(rng, field, m, steps=6):
    u = [[Poly.one(field) if i == j else Poly.zero(field) for j in range(m)] for i in range(m)]
    for _ in range(steps):
        i, j = rng.sample(range(m), 2)
        c = random_poly(rng, field, 2)
        u[i] = [a + c * b for a, b in zip(u[i], u[j])]
    rng.shuffle(u)
    return u


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_minima_invariant_under_unimodular_change(seed, m):
    rng = seeded(seed)
    field = F3
    rows = [[random_poly(rng, field, 2) for _ in range(m)] for _ in range(m)]
    if not poly_det(rows):
        return
    u = _unimodular(rng, field, m)
    rows2 = [[sum((u[i][k] * rows[k][j] for k in range(m)), Poly.zero(field))
              for j in range(m)] for i in range(m)]
    b1 = LatticeBasis(field, [[LaurentBall.from_poly(c).shift(1) for c in r] for r in rows])
    b2 = LatticeBasis(field, [[LaurentBall.from_poly(c).shift(1) for c in r] for r in rows2])
    assert successive_minima(b1) == successive_minima(b2)
    assert hermite_form(rows) == hermite_form(rows2)


def test_leibniz_determinant_oracle():
    rng = seeded(9)
    for m in (2, 3, 4):
        for _ in range(20):
            mat = [[random_poly(rng, F3, 3) for _ in range(m)] for _ in range(m)]
            total = Poly.zero(F3)
            for perm in itertools.permutations(range(m)):
                inv = sum(1 for i in range(m) for j in range(i + 1, m) if perm[i] > perm[j])
                term = Poly.one(F3)
                for i in range(m):
                    term = term * mat[i][perm[i]]
                total = total - term if inv % 2 else total + term
            assert poly_det(mat) == total


def test_norm_like_axioms():
    rng = seeded(4)
    field = F3
    subs = [s for s in enumerate_primitive(field, 3, 2, 1)]
    for s in rng.sample(subs, 60):
        basis = [list(r) for r in s.basis]
        # N1: a full-rank sublattice has norm at least that of Delta
        c = [[random_poly(rng, field, 1) for _ in range(s.rank)] for _ in range(s.rank)]
        if poly_det(c) if s.rank > 1 else c[0][0]:
            sub = [[sum((c[i][k] * basis[k][j] for k in range(s.rank)), Poly.zero(field))
                    for j in range(3)] for i in range(s.rank)]
            assert Submodule(field, sub).norm().e >= s.norm().e
        # N2: |Delta + Z gamma| <= |Delta| |Z gamma|
        gamma = [random_poly(rng, field, 2) for _ in range(3)]
        if s.rank < 3 and laurent_rank(basis + [gamma], field) == s.rank + 1:
            big = Submodule(field, basis + [gamma]).norm()
            assert big.e <= s.norm().e + Submodule(field, [gamma]).norm().e
        # N3: perturbing entries far below the unit scale leaves the norm unchanged
        balls = [[LaurentBall.from_poly(v) + LaurentBall.monomial(field, -12) * rng.randint(0, 2)
                  for v in r] for r in basis]
        assert wedge_norm(balls, field) == s.norm()


def test_plucker_and_rank():
    pl = plucker([["1", "X"], ["0", "X^-1"]], F3)
    assert pl[(0, 1)].norm() == E(-1)
    assert laurent_rank([["1", "X"], ["X", "X^2"]], F3) == 1
    assert laurent_rank([["1", "X"], ["0", "X^-1"]], F3) == 2
