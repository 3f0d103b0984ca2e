"""Continued fractions over K and brute-force Diophantine witnesses.

Test points come from three generators: rational functions (finite
expansions), periodic continued fractions (bounded partial quotients, hence
badly approximable) and lacunary series ``sum X^{-c^i}`` (very well
approximable).  :func:`best_witness` is the exhaustive oracle that the flow
module is checked against.
"""
import itertools
from dataclasses import dataclass

from .errors import InsufficientPrecision, NonConvergent
from .field_arith import Poly
from .laurent import LaurentBall, NormExp, pi_plus_polys


@dataclass(frozen=True)
class Witness:
    p: Poly
    q: tuple
    err: NormExp
    pi_plus_q: NormExp


@dataclass(frozen=True)
class CFExpansion:
    quotients: tuple
    exact_terminated: bool

    def __str__(self):
        head, *tail = [str(a) for a in self.quotients] or ["0"]
        more = "" if self.exact_terminated else ", ..."
        return f"[{head}; {', '.join(tail)}{more}]"


def cf_expand(x, max_terms, partial=False):
    """Expand ``x`` into at most ``max_terms`` partial quotients a_0; a_1, ...

    ``x`` is a LaurentBall or a ``(num, den)`` pair of polynomials.  Exact
    inputs run the Euclidean algorithm and terminate.  For a ball, running out
    of certified precision raises InsufficientPrecision unless ``partial`` is
    set, in which case the certified prefix is returned.
    """
    if isinstance(x, tuple):
        return _cf_rational(x[0], x[1], max_terms)
    if x.exact:
        # a Laurent polynomial is the rational function P / X^s
        s = max(x.prec, 0)
        num = LaurentBall.shift(x, s).polynomial_part()
        return _cf_rational(num, Poly.monomial(x.field, s), max_terms)
    quotients = []
    cur = x
    try:
        while len(quotients) < max_terms:
            a = cur.polynomial_part()
            if quotients and a.deg < 1:
                raise InsufficientPrecision("partial quotient not certified")
            frac = cur.frac_part()
            if frac.known_zero:
                raise InsufficientPrecision("fractional part indistinguishable from 0")
            quotients.append(a)
            cur = frac.inv()
    except InsufficientPrecision:
        if not partial:
            raise
    return CFExpansion(tuple(quotients), False)


def _cf_rational(num, den, max_terms):
    quotients = []
    while den and len(quotients) < max_terms:
        a, r = divmod(num, den)
        quotients.append(a)
        num, den = den, r
    return CFExpansion(tuple(quotients), not den)


def convergents(cf):
    """(p_i, q_i) from p_i = a_i p_{i-1} + p_{i-2}, q_i = a_i q_{i-1} + q_{i-2}."""
    if not cf.quotients:
        return []
    f = cf.quotients[0].field
    p0, p1 = Poly.one(f), Poly.zero(f)
    q0, q1 = Poly.zero(f), Poly.one(f)
    out = []
    for a in cf.quotients:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        out.append((p0, q0))
    return out


def _lex_key(q, bound):
    return tuple(tuple(c.coeffs) + (0,) * (bound + 1 - len(c.coeffs)) for c in q)


def _polys_up_to(field, bound):
    for cs in itertools.product(field.elements(), repeat=bound + 1):
        yield Poly(field, cs)


def best_witness(x, degree_bound):
    """Exhaustive minimizer of |p + q.x| over nonzero q with deg q_i <= bound.

    p is taken as -[q.x], which is optimal for each q.  Ties are broken by
    Pi_+(q) and then by the lexicographic order of the padded coefficient
    tuples of q.  Any candidate whose error is not resolved at the precision
    of ``x`` makes the minimum uncertifiable.
    """
    x = tuple(x)
    field = x[0].field
    best = None
    polys = list(_polys_up_to(field, degree_bound))
    for q in itertools.product(polys, repeat=len(x)):
        if not any(q):
            continue
        s = LaurentBall.zero(field)
        for qi, xi in zip(q, x):
            if qi:
                s = s + xi * LaurentBall.from_poly(qi)
        frac = s.frac_part()
        if frac.known_zero and not frac.exact:
            raise InsufficientPrecision(
                f"error of q={[str(c) for c in q]} unresolved at precision {frac.prec}")
        err = frac.norm()
        key = (err, pi_plus_polys(q), _lex_key(q, degree_bound))
        if best is None or _key_lt(key, best[0]):
            best = (key, q, -s.polynomial_part())
    key, q, p = best
    return Witness(p, tuple(q), key[0], key[1])


def _key_lt(a, b):
    if a[0] != b[0]:
        return a[0] < b[0]
    if a[1] != b[1]:
        return a[1] < b[1]
    return a[2] < b[2]


def witness_error(x, p, q):
    """|p + q.x| as a ball (exact when x is exact)."""
    s = LaurentBall.from_poly(p)
    for qi, xi in zip(q, x):
        s = s + xi * LaurentBall.from_poly(qi)
    return s


def make_liouville(c, prec, field=None):
    """sum_{i>=0} X^{-c^i} through index ``prec`` (over F_3 by default)."""
    from .field_arith import make_field
    if c < 2:
        raise ValueError("lacunary exponent base must be >= 2")
    field = field or make_field(3)
    terms, e = {}, 1
    while e <= prec:
        terms[-e] = 1
        e *= c
    return LaurentBall.from_laurent_dict(field, terms, prec)


def make_periodic(quotients, prec):
    """The purely periodic continued fraction [0; a_1, ..., a_r, a_1, ...].

    Iterates y -> 1/(a_1 + 1/(a_2 + ... 1/(a_r + y))) on the unit ball with
    ball arithmetic, so the reported precision is certified rather than
    assumed.
    """
    quotients = list(quotients)
    if not quotients:
        raise NonConvergent("need at least one partial quotient")
    if any(a.deg < 1 for a in quotients):
        raise NonConvergent("partial quotients must have degree >= 1")
    field = quotients[0].field
    lifted = [LaurentBall.from_poly(a) for a in quotients]
    y = LaurentBall.zero(field, prec=0)
    while y.prec < prec:
        for a in reversed(lifted):
            y = (a + y).inv()
    return y.truncate(prec)
