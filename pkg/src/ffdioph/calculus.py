"""Difference quotients of polynomial maps over K.

Phi_n f is the n-th divided difference.  For a monomial x^m it is the
complete homogeneous symmetric polynomial h_{m-n} of the n+1 points, which
gives a division-free ("symbolic") formula valid also at repeated points.
On the diagonal it reduces to the Hasse derivative D_n f = sum C(m, n) a_m x^{m-n},
and n! D_n f equals the ordinary n-th derivative, even when n! vanishes mod p.
"""
import itertools
from dataclasses import dataclass
from math import comb, factorial

from . import _parse
from .errors import DimensionMismatch, ParseError, RepeatedPoint
from .laurent import LaurentBall
from .polylattice import laurent_rank

_ALIASES = {"x": 0, "y": 1, "z": 2}


def _var_index(name):
    if name in _ALIASES:
        return _ALIASES[name]
    if name.startswith("x") and name[1:].isdigit() and int(name[1:]) >= 1:
        return int(name[1:]) - 1
    return None


class MPoly:
    """A polynomial in ``nvars`` variables with coefficients in K.

    ``terms`` maps exponent tuples to nonzero exact LaurentBalls.
    """
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        self.terms = {}
        for e, c in (terms or {}).items():
            if isinstance(c, int):
                c = LaurentBall.const(field, field.from_int(c))
            if not c.is_exact_zero:
                self.terms[tuple(e)] = c

    @classmethod
    def const(cls, field, nvars, c):
        if isinstance(c, int):
            c = LaurentBall.const(field, field.from_int(c))
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, field, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def parse(cls, field, text, nvars=None):
        """Parse ``x1^2*x2 + 2*x1`` (also ``x``, ``y``, ``z``; ``X`` is the Laurent variable)."""
        node = _parse.parse(str(text))
        if nvars is None:
            nvars = max([1] + [_var_index(nm) + 1 for nm in _names(node)
                               if _var_index(nm) is not None])

        def atom(name, e):
            i = _var_index(name)
            if i is not None:
                if i >= nvars:
                    raise ParseError(f"variable {name} outside {nvars} variables")
                if e < 0:
                    raise ParseError("negative powers of variables are not polynomials")
                return cls.var(field, nvars, i, e)
            if name == "X":
                return cls.const(field, nvars, LaurentBall.monomial(field, e))
            if name == "g" and field.nu > 1:
                return cls.const(field, nvars, LaurentBall.const(field, field.pow(field.p, e)))
            raise ParseError(f"unknown symbol {name!r}")

        return _parse.evaluate(node, lambda n: cls.const(field, nvars, n), atom)

    # -- inspection ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def var_degree(self, j):
        return max((e[j] for e in self.terms), default=-1)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join((f"x{j + 1}" if self.nvars > 1 else "x") + (f"^{k}" if k > 1 else "")
                            for j, k in enumerate(e) if k)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise DimensionMismatch("polynomials in different numbers of variables")
            return other
        return MPoly.const(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MPoly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            other = self._lift(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return MPoly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = MPoly.const(self.field, self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus -----------------------------------------------------------
    def __call__(self, point):
        """Evaluate at ``point`` (LaurentBalls, or MPolys for substitution)."""
        point = list(point)
        if len(point) != self.nvars:
            raise DimensionMismatch(f"need {self.nvars} coordinates")
        powers = [{} for _ in point]
        symbolic = bool(point) and isinstance(point[0], MPoly)
        acc = None
        for e, c in self.terms.items():
            mono = None
            for j, k in enumerate(e):
                if not k:
                    continue
                pw = powers[j].get(k)
                if pw is None:
                    pw = point[j] ** k if isinstance(point[j], MPoly) else _ball_pow(point[j], k)
                    powers[j][k] = pw
                mono = pw if mono is None else mono * pw
            if mono is None:
                term = MPoly.const(self.field, point[0].nvars, c) if symbolic else c
            else:
                term = mono * c
            acc = term if acc is None else acc + term
        if acc is None:
            return MPoly(self.field, point[0].nvars) if symbolic else LaurentBall.zero(self.field)
        return acc

    def hasse(self, beta):
        """D_beta f: coefficient of y^beta in f(x + y)."""
        p = self.field.p
        out = {}
        for e, c in self.terms.items():
            if any(a < b for a, b in zip(e, beta)):
                continue
            mult = 1
            for a, b in zip(e, beta):
                mult = mult * comb(a, b) % p
            if mult:
                out[tuple(a - b for a, b in zip(e, beta))] = c.scale(self.field.from_int(mult))
        return MPoly(self.field, self.nvars, out)

    def derivative(self, beta):
        """Formal partial derivative of order beta (falling factorials mod p)."""
        p = self.field.p
        out = {}
        for e, c in self.terms.items():
            if any(a < b for a, b in zip(e, beta)):
                continue
            mult = 1
            for a, b in zip(e, beta):
                mult = mult * (factorial(a) // factorial(a - b)) % p
            if mult:
                out[tuple(a - b for a, b in zip(e, beta))] = c.scale(self.field.from_int(mult))
        return MPoly(self.field, self.nvars, out)

    def taylor(self, center):
        """{beta: D_beta f(center)} for the nonzero Taylor coefficients."""
        out = {}
        for beta in _all_betas(self):
            v = self.hasse(beta)(center)
            if not v.is_exact_zero:
                out[beta] = v
        return out


def _names(node):
    if node[0] == "sym":
        yield node[1]
    for child in node[1:]:
        if isinstance(child, tuple):
            yield from _names(child)


def _ball_pow(v, k):
    out = v
    for _ in range(k - 1):
        out = out * v
    return out


def _all_betas(f):
    degs = [f.var_degree(j) for j in range(f.nvars)]
    return itertools.product(*(range(d + 1) for d in degs))


@dataclass(frozen=True)
class MultiIndex:
    beta: tuple

    @property
    def size(self):
        return sum(self.beta)

    def factorial(self, p=None):
        out = 1
        for b in self.beta:
            out *= factorial(b)
        return out if p is None else out % p


class PolyMap:
    """f = (f_1, ..., f_n) with each f_i an MPoly in d variables."""

    def __init__(self, components):
        self.components = tuple(components)
        if not self.components:
            raise DimensionMismatch("a polynomial map needs a component")
        self.field = self.components[0].field
        self.d = self.components[0].nvars
        if any(c.nvars != self.d for c in self.components):
            raise DimensionMismatch("components in different numbers of variables")
        self.n = len(self.components)

    @classmethod
    def parse(cls, field, text, d=None):
        """Components separated by ``;``, e.g. ``x;x^2``."""
        parts = [s for s in str(text).split(";") if s.strip()]
        if d is None:
            d = max(MPoly.parse(field, s).nvars for s in parts)
        return cls([MPoly.parse(field, s, d) for s in parts])

    def __call__(self, point):
        return tuple(c(point) for c in self.components)

    def degree_bounds(self):
        return tuple(max(c.var_degree(j) for c in self.components) for j in range(self.d))

    def __str__(self):
        return "; ".join(str(c) for c in self.components)


def _complete_homogeneous(field, nvars, degree, offset=0, total=None):
    """h_degree in variables offset..offset+nvars-1 of a ring with ``total`` vars."""
    total = nvars if total is None else total
    if degree < 0:
        return MPoly(field, total)
    terms = {}
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * total
        for j in combo:
            e[offset + j] += 1
        terms[tuple(e)] = 1
    return MPoly(field, total, terms)


def _univariate(f):
    if isinstance(f, PolyMap):
        f = f.components[0]
    if f.nvars != 1:
        raise DimensionMismatch("a univariate polynomial is required")
    return f


def phi_n_symbolic(f, n):
    """Phi_n f as a polynomial in n+1 variables: sum_m a_m h_{m-n}."""
    f = _univariate(f)
    out = MPoly(f.field, n + 1)
    for (m,), c in f.terms.items():
        if m >= n:
            out = out + _complete_homogeneous(f.field, n + 1, m - n) * c
    return out


def phi_n(f, points=None, n=None, path="symbolic"):
    """n-th difference quotient of a univariate polynomial.

    Without points returns the symbolic polynomial in n+1 variables.  The
    ``numeric`` path runs the inductive quotient and needs distinct points.
    """
    f = _univariate(f)
    if points is None:
        return phi_n_symbolic(f, n)
    points = list(points)
    if path == "symbolic":
        return phi_n_symbolic(f, len(points) - 1)(points)
    if path != "numeric":
        raise ValueError(f"unknown path {path!r}")
    return _numeric_dd(lambda pt: f([pt]), tuple(points))


def _exact_div(a, b):
    """a / b for Laurent polynomials when the quotient is a Laurent polynomial."""
    if isinstance(a, MPoly):
        raise TypeError("numeric path needs numeric points")
    if a.is_exact_zero:
        return a
    field = a.field
    # scaling by X^prec makes the constant term nonzero, so pb is prime to X
    sa, sb = a.prec, b.prec
    pa = a.shift(sa).polynomial_part()
    pb = b.shift(sb).polynomial_part()
    q, r = divmod(pa, pb)
    if r:
        raise ArithmeticError("difference quotient is not a Laurent polynomial")
    return LaurentBall.from_poly(q).shift(sb - sa) if q else LaurentBall.zero(field)


def _numeric_dd(func, pts):
    """Inductive divided difference over the tuple ``pts`` of a univariate callable."""
    if len(pts) == 1:
        return func(pts[0])
    x1, x2 = pts[0], pts[1]
    diff = x1 - x2
    if diff.is_exact_zero:
        raise RepeatedPoint("difference quotient at repeated points")
    rest = pts[2:]
    num = _numeric_dd(func, (x1,) + rest) - _numeric_dd(func, (x2,) + rest)
    return _exact_div(num, diff)


def phi_beta_symbolic(f, beta):
    """Phi_beta f in sum(beta_j + 1) variables, block j holding variable j's points."""
    beta = tuple(beta.beta if isinstance(beta, MultiIndex) else beta)
    if len(beta) != f.nvars:
        raise DimensionMismatch("multi-index length differs from number of variables")
    total = sum(b + 1 for b in beta)
    offsets = list(itertools.accumulate([0] + [b + 1 for b in beta]))[:-1]
    out = MPoly(f.field, total)
    for e, c in f.terms.items():
        if any(a < b for a, b in zip(e, beta)):
            continue
        term = MPoly.const(f.field, total, c)
        for j, (a, b) in enumerate(zip(e, beta)):
            term = term * _complete_homogeneous(f.field, b + 1, a - b, offsets[j], total)
        out = out + term
    return out


def phi_beta(f, beta, points=None, path="symbolic"):
    """Phi_beta f = Phi^{i_1}_1 o ... o Phi^{i_d}_d f.

    ``points`` lists, per variable j, a tuple of beta_j + 1 values.
    """
    if isinstance(f, PolyMap):
        f = f.components[0]
    beta = tuple(beta.beta if isinstance(beta, MultiIndex) else beta)
    if points is None:
        return phi_beta_symbolic(f, beta)
    points = [tuple(p) for p in points]
    if [len(p) for p in points] != [b + 1 for b in beta]:
        raise DimensionMismatch("need beta_j + 1 points for variable j")
    if path == "symbolic":
        return phi_beta_symbolic(f, beta)([v for p in points for v in p])
    if path != "numeric":
        raise ValueError(f"unknown path {path!r}")
    return _numeric_multi(f, points, len(points) - 1)


def _numeric_multi(f, points, j):
    if j < 0:
        return f([p[0] for p in points])
    if len(points[j]) == 1:
        return _numeric_multi(f, points, j - 1)

    def along(pt_tuple):
        pts = list(points)
        pts[j] = pt_tuple
        return _numeric_multi(f, pts, j - 1)

    return _numeric_dd_tuple(along, points[j])


def _numeric_dd_tuple(func, pts):
    if len(pts) == 1:
        return func(pts)
    x1, x2 = pts[0], pts[1]
    diff = x1 - x2
    if diff.is_exact_zero:
        raise RepeatedPoint("difference quotient at repeated points")
    rest = pts[2:]
    num = _numeric_dd_tuple(func, (x1,) + rest) - _numeric_dd_tuple(func, (x2,) + rest)
    return _exact_div(num, diff)


def d_j(f, j, a):
    """D_j f(a) = the symbolic Phi_j f on the diagonal (a, ..., a)."""
    return phi_n(f, [a] * (j + 1))


def factorial_identity_check(f, j, a=None):
    """j! D_j f == f^{(j)}, at the point ``a`` or identically when ``a`` is None."""
    f = _univariate(f)
    p = f.field.p
    jf = f.field.from_int(factorial(j) % p)
    if a is None:
        lhs = phi_n_symbolic(f, j)(
            [MPoly.var(f.field, 1, 0)] * (j + 1)) * LaurentBall.const(f.field, jf)
        return lhs == f.derivative((j,))
    lhs = d_j(f, j, a).scale(jf)
    return lhs == f.derivative((j,))([a])


def diagonal_quotients(f, x0, order, include_zero=False):
    """[(beta, (Phi-bar_beta f_i (x0))_i)] for all |beta| <= order."""
    out = []
    lo = 0 if include_zero else 1
    for size in range(lo, order + 1):
        for beta in _betas_of_size(f.d, size):
            out.append((beta, tuple(c.hasse(beta)(x0) for c in f.components)))
    return out


def _betas_of_size(d, size):
    for combo in itertools.combinations_with_replacement(range(d), size):
        beta = [0] * d
        for j in combo:
            beta[j] += 1
        yield tuple(beta)


def nondeg_order(f, x0, l_max, include_zero=False):
    """Least l <= l_max with span{Phi-bar_beta f(x0) : 1 <= |beta| <= l} = K^n."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    x0 = tuple(x0)
    vecs = []
    if include_zero:
        vecs.append(f(x0))
    for l in range(1, l_max + 1):
        for beta in _betas_of_size(f.d, l):
            vecs.append(tuple(c.hasse(beta)(x0) for c in f.components))
        if laurent_rank(vecs, f.field) == f.n:
            return l
    return None
