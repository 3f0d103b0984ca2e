import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from conftest import F2, F3, F9, L, seeded
from ffdioph.calculus import (MPoly, MultiIndex, PolyMap, d_j, diagonal_quotients,
                              factorial_identity_check, nondeg_order, phi_beta, phi_n,
                              phi_n_symbolic)
from ffdioph.errors import ParseError, RepeatedPoint
from ffdioph.laurent import LaurentBall

M = lambda s, n=None, f=F3: MPoly.parse(f, s, n)


def var(i, n, f=F3):
    return MPoly.var(f, n, i)


def random_mpoly(rng, field, nvars, deg):
    terms = {}
    for e in itertools.product(range(deg + 1), repeat=nvars):
        if sum(e) <= deg and rng.random() < 0.5:
            c = LaurentBall.monomial(field, rng.randint(-2, 2)).scale(
                field.from_int(rng.randrange(1, field.p)))
            terms[e] = c
    return MPoly(field, nvars, terms)


def random_point(rng, field):
    cs = [rng.randrange(field.k) for _ in range(4)]
    return LaurentBall(field, rng.randint(-2, 1), cs)


def test_parse_and_eval():
    f = M("x1^2*x2 + 2*x1")
    assert f.nvars == 2 and f.degree() == 3
    assert f([L("X"), L("1")]) == L("X^2+2*X")
    assert M("X*x^2")([L("X^-1")]) == L("X^-1")
    assert M("x;x^2".split(";")[1]).var_degree(0) == 2
    assert M("g*x", f=F9).terms[(1,)] == LaurentBall.const(F9, 3)
    with pytest.raises(ParseError):
        M("x^-1")
    with pytest.raises(ParseError):
        M("w")
    pm = PolyMap.parse(F3, "x;x^2")
    assert pm.n == 2 and pm.d == 1 and pm.degree_bounds() == (2,)
    assert pm([L("X")]) == (L("X"), L("X^2"))


def test_phi_n_examples():
    a, b = var(0, 2), var(1, 2)
    assert phi_n(M("x^2"), [a, b]) == a + b
    assert phi_n(M("x^3"), [a, b]) == a * a + a * b + b * b
    c = var(0, 1)
    assert phi_n(M("x^3"), [c] * 4) == MPoly.const(F3, 1, 1)
    assert phi_n(M("x^3"), [L("X"), L("X+1")], path="numeric") == L("X^2+X^2+X+X^2+2*X+1")
    with pytest.raises(RepeatedPoint):
        phi_n(M("x^3"), [L("X"), L("X")], path="numeric")


def test_phi_beta_examples():
    one = lambda n: MPoly.const(F3, n, 1)
    assert phi_beta(M("x*y"), (1, 1)) == one(4)
    a = var(0, 1)
    assert phi_beta(M("x^3", 1), (1,), [(a, a)]) == MPoly(F3, 1)
    assert phi_beta(M("x^2*y"), (2, 1)) == one(5)
    assert MultiIndex((2, 1)).size == 3 and MultiIndex((2, 1)).factorial() == 2
    assert MultiIndex((3, 0)).factorial(3) == 0


def test_d_j_examples():
    a = var(0, 1)
    assert d_j(M("x^2"), 1, a) == a * 2
    assert d_j(M("x^3"), 3, a) == MPoly.const(F3, 1, 1)
    assert d_j(M("x^3"), 1, a) == MPoly(F3, 1)
    assert d_j(M("x^3"), 1, L("X+2")).is_exact_zero


def test_factorial_identity_examples():
    assert factorial_identity_check(M("x^2"), 1)
    assert factorial_identity_check(M("x^3"), 3)
    assert factorial_identity_check(M("x^4"), 2)
    assert factorial_identity_check(M("x^4"), 2, L("X^-1+2"))


def test_nondeg_examples():
    zero = [L("0")]
    assert nondeg_order(PolyMap.parse(F3, "x;x^2"), zero, 5) == 2
    assert nondeg_order(PolyMap.parse(F3, "x;x^3"), zero, 5) == 3
    assert nondeg_order(PolyMap.parse(F3, "x;x+1"), zero, 5) is None
    assert nondeg_order(PolyMap.parse(F3, "x;x^2"), [L("X")], 5) == 2
    # with beta = 0 included the constant vector already helps
    assert nondeg_order(PolyMap.parse(F3, "1;x"), zero, 3) is None
    assert nondeg_order(PolyMap.parse(F3, "1;x"), zero, 3, include_zero=True) == 1
    with pytest.raises(ValueError):
        nondeg_order(PolyMap.parse(F3, "x"), zero, 0)
    dq = diagonal_quotients(PolyMap.parse(F3, "x;x^3"), zero, 3)
    assert [(b, tuple(str(v) for v in vals)) for b, vals in dq] == [
        ((1,), ("1", "0")), ((2,), ("0", "0")), ((3,), ("0", "1"))]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_phi_n_symmetric_and_recursive(seed, n):
    rng = seeded(seed)
    f = random_mpoly(rng, F3, 1, 6)
    vs = [var(i, n + 1) for i in range(n + 1)]
    base = phi_n(f, vs)
    perm = vs[:]
    rng.shuffle(perm)
    assert phi_n(f, perm) == base
    # (x0 - x1) Phi_n(x0, x1, rest) = Phi_{n-1}(x0, rest) - Phi_{n-1}(x1, rest)
    lhs = (vs[0] - vs[1]) * base
    rhs = phi_n(f, [vs[0]] + vs[2:]) - phi_n(f, [vs[1]] + vs[2:])
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_numeric_matches_symbolic(seed, n):
    rng = seeded(seed)
    f = random_mpoly(rng, F3, 1, 5)
    pts = []
    while len(pts) < n + 1:
        p = random_point(rng, F3)
        if all(not (p - q).is_exact_zero for q in pts):
            pts.append(p)
    assert phi_n(f, pts, path="numeric") == phi_n(f, pts)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_multivariate_numeric_matches_symbolic(seed):
    rng = seeded(seed)
    f = random_mpoly(rng, F3, 2, 4)
    beta = (rng.randint(0, 2), rng.randint(0, 2))
    points = []
    for b in beta:
        blk = []
        while len(blk) < b + 1:
            p = random_point(rng, F3)
            if all(not (p - q).is_exact_zero for q in blk):
                blk.append(p)
        points.append(tuple(blk))
    assert phi_beta(f, beta, points, path="numeric") == phi_beta(f, beta, points)


def _iterated_derivative(f, beta):
    for j, b in enumerate(beta):
        step = tuple(1 if i == j else 0 for i in range(f.nvars))
        for _ in range(b):
            f = f.derivative(step)
    return f


@pytest.mark.parametrize("field", [F2, F3])
def test_partial_derivative_equals_factorial_times_quotient(field):
    # d_beta f = beta! Phi-bar_beta f on the diagonal, including beta! = 0 mod p
    rng = seeded(field.p)
    for _ in range(10):
        f = random_mpoly(rng, field, 2, 5)
        for beta in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (3, 0), (0, 3), (2, 2)]:
            lhs = _iterated_derivative(f, beta)
            bf = field.from_int(factorial(beta[0]) * factorial(beta[1]) % field.p)
            for _ in range(10):
                a = [random_point(rng, field), random_point(rng, field)]
                pts = [(a[0],) * (beta[0] + 1), (a[1],) * (beta[1] + 1)]
                assert lhs(a) == phi_beta(f, beta, pts).scale(bf)
                assert f.hasse(beta)(a) == phi_beta(f, beta, pts)


@pytest.mark.parametrize("field", [F2, F3])
def test_pth_derivative_vanishes(field):
    rng = seeded(7)
    for _ in range(20):
        f = random_mpoly(rng, field, 1, 9)
        assert not _iterated_derivative(f, (field.p,))
        for j in range(1, 6):
            assert factorial_identity_check(f, j)


def test_taylor_expansion_recovers_polynomial():
    rng = seeded(1)
    f = random_mpoly(rng, F3, 2, 4)
    c = [random_point(rng, F3), random_point(rng, F3)]
    tay = f.taylor(c)
    h = [var(0, 2) - MPoly.const(F3, 2, c[0]), var(1, 2) - MPoly.const(F3, 2, c[1])]
    rebuilt = MPoly(F3, 2)
    for beta, v in tay.items():
        rebuilt = rebuilt + h[0] ** beta[0] * h[1] ** beta[1] * v
    assert rebuilt == f
