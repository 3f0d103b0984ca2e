"""Precision-tracked arithmetic in K = F_q((1/X)).

A :class:`LaurentBall` stores the coefficients a_s, ..., a_N of
``sum a_i X^{-i}`` together with either an exact flag (the tail is zero) or
the promise that the true value differs by at most k^{-(N+1)}.  Index i
always refers to the power X^{-i}, so ``X`` itself has index -1 and norm k.

Norms are :class:`NormExp` values ``k^e`` (or zero); no float ever appears.
"""
from functools import total_ordering

from . import _parse
from .errors import FieldMismatch, InsufficientPrecision, ParseError
from .field_arith import Poly

INF = float("inf")


@total_ordering
class NormExp:
    """A norm value k**e, or the zero norm when ``e is None``."""
    __slots__ = ("e",)

    def __init__(self, e):
        self.e = e

    @classmethod
    def zero(cls):
        return cls(None)

    @property
    def is_zero(self):
        return self.e is None

    def __eq__(self, other):
        return isinstance(other, NormExp) and self.e == other.e

    def __hash__(self):
        return hash(("NormExp", self.e))

    def __lt__(self, other):
        if self.e is None:
            return other.e is not None
        if other.e is None:
            return False
        return self.e < other.e

    def __mul__(self, other):
        if self.e is None or other.e is None:
            return NormExp(None)
        return NormExp(self.e + other.e)

    def scale(self, de):
        """Multiply by k**de."""
        return self if self.e is None else NormExp(self.e + de)

    def __pow__(self, n):
        return self if self.e is None else NormExp(self.e * n)

    def __repr__(self):
        return "NormExp(zero)" if self.e is None else f"NormExp(k^{self.e})"

    def to_record(self):
        return {"zero": True, "e": None} if self.e is None else {"zero": False, "e": self.e}


ONE = NormExp(0)


def norm_max(norms):
    out = NormExp(None)
    for n in norms:
        if out < n:
            out = n
    return out


class LaurentBall:
    """A Laurent series in 1/X known through index ``prec``.

    ``coeffs[i]`` is the coefficient of X^{-(start + i)}.  Nonzero values are
    normalized so ``coeffs[0] != 0`` (then the valuation is ``start``).  Exact
    values additionally drop trailing zeros and keep ``prec`` at the last
    stored index; the exact zero has ``start == 0, prec == -1``.
    """
    __slots__ = ("field", "start", "coeffs", "prec", "exact")

    def __init__(self, field, start, coeffs, prec=None, exact=None):
        cs = list(coeffs)
        if exact is None:
            exact = prec is None
        if exact:
            while cs and cs[-1] == 0:
                cs.pop()
        else:
            known = prec - start + 1
            if known < 0:
                start, cs = prec + 1, []
            elif len(cs) > known:
                cs = cs[:known]
            elif len(cs) < known:
                cs += [0] * (known - len(cs))
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        if i == len(cs):
            cs = []
            start = 0 if exact else prec + 1
        else:
            start += i
            cs = cs[i:]
        self.field = field
        self.start = start
        self.coeffs = tuple(cs)
        self.prec = start + len(cs) - 1 if exact else prec
        self.exact = exact

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, prec=None):
        return cls(field, 0, (), prec)

    @classmethod
    def const(cls, field, c):
        return cls(field, 0, (c,))

    @classmethod
    def monomial(cls, field, e, c=1):
        """The exact value c * X**e."""
        return cls(field, -e, (c,))

    @classmethod
    def from_poly(cls, poly):
        d = poly.deg
        if not poly:
            return cls.zero(poly.field)
        return cls(poly.field, -d, poly.coeffs[::-1])

    @classmethod
    def from_laurent_dict(cls, field, terms, prec=None):
        """Build from ``{power of X: coefficient}``."""
        if not terms:
            return cls.zero(field, prec)
        lo = -max(terms)
        hi = -min(terms)
        if prec is not None:
            hi = max(hi, prec)
        cs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            cs[-e - lo] = c
        return cls(field, lo, cs, prec)

    @classmethod
    def from_ratio(cls, num, den, prec):
        """The expansion of num/den (polynomials) through index ``prec``."""
        return cls.from_poly(num).div(cls.from_poly(den), prec)

    @classmethod
    def parse(cls, field, text):
        """Parse ``X^2+1+X^-1`` with an optional ``+O(X^-N)`` tail."""
        node = _parse.parse(str(text))
        body, tail = _parse.split_big_o(node)
        prec = None
        if tail is not None:
            if tail[0] == "pow" and tail[1] == ("sym", "X"):
                prec = -tail[2] - 1
            elif tail == ("sym", "X"):
                prec = -2
            elif tail == ("num", 1):
                prec = -1
            else:
                raise ParseError(f"tail marker must be O(X^e) in {text!r}")
        if body is None:
            val = cls.zero(field)
        else:
            def atom(name, e):
                if name == "X":
                    return cls.monomial(field, e)
                if name == "g" and field.nu > 1:
                    return cls.const(field, field.pow(field.p, e))
                raise ParseError(f"unknown symbol {name!r} in Laurent syntax")
            val = _parse.evaluate(body, lambda n: cls.const(field, field.from_int(n)), atom)
        return val if prec is None else val.truncate(prec)

    @classmethod
    def from_record(cls, field, rec):
        return cls(field, rec["start"], rec["coeffs"], None if rec["exact"] else rec["prec"])

    def to_record(self):
        return {"start": self.start, "coeffs": list(self.coeffs),
                "prec": self.prec, "exact": self.exact}

    # -- inspection ---------------------------------------------------------
    @property
    def is_exact_zero(self):
        return self.exact and not self.coeffs

    @property
    def known_zero(self):
        """True when no nonzero coefficient is known (the value may be 0)."""
        return not self.coeffs

    @property
    def radius(self):
        """Error radius as a NormExp (zero for exact values)."""
        return NormExp(None) if self.exact else NormExp(-(self.prec + 1))

    def coeff(self, i):
        """Coefficient of X^{-i}; raises if i lies beyond the known range."""
        if not self.exact and i > self.prec:
            raise InsufficientPrecision(f"coefficient {i} beyond precision {self.prec}")
        j = i - self.start
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def valuation(self):
        if self.coeffs:
            return self.start
        if self.exact:
            return INF
        raise InsufficientPrecision("valuation undetermined: all known coefficients vanish")

    def norm(self):
        if self.coeffs:
            return NormExp(-self.start)
        if self.exact:
            return NormExp(None)
        raise InsufficientPrecision("norm undetermined: all known coefficients vanish")

    def norm_bound(self):
        """An upper bound for the norm of every point of the ball."""
        if self.coeffs:
            return NormExp(-self.start)
        return self.radius

    def __eq__(self, other):
        if not isinstance(other, LaurentBall):
            return NotImplemented
        return (self.field == other.field and self.exact == other.exact
                and self.start == other.start and self.coeffs == other.coeffs
                and self.prec == other.prec)

    def __hash__(self):
        return hash((self.start, self.coeffs, self.prec, self.exact))

    def __repr__(self):
        return f"LaurentBall({self})"

    def __str__(self):
        f = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = -(self.start + i)
            cs = f.format_elem(c)
            if f.nu > 1 and "+" in cs:
                cs = f"({cs})"
            if e == 0:
                terms.append(cs)
            else:
                mono = "X" if e == 1 else f"X^{e}"
                terms.append(mono if c == 1 else f"{cs}*{mono}")
        out = "+".join(terms)
        if not self.exact:
            tail = f"O(X^{-(self.prec + 1)})"
            out = f"{out}+{tail}" if out else tail
        return out or "0"

    def contains(self, other):
        """True when every point of ``other`` lies in this ball."""
        if self.exact:
            return other.exact and other == self
        if not other.exact and other.prec < self.prec:
            return False
        lo = min(self.start, other.start)
        return all(self.coeff(i) == other.coeff(i) for i in range(lo, self.prec + 1))

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return LaurentBall.const(self.field, self.field.from_int(other))
        if isinstance(other, Poly):
            other = LaurentBall.from_poly(other)
        if other.field != self.field:
            raise FieldMismatch("Laurent series over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return _add(self, other, False)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return _add(self, other, True)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        f = self.field
        return LaurentBall(f, self.start, [f.neg(c) for c in self.coeffs],
                           None if self.exact else self.prec)

    def __mul__(self, other):
        other = self._check(other)
        return _mul(self, other)

    __rmul__ = __mul__

    def scale(self, c):
        f = self.field
        if c == 0:
            return LaurentBall.zero(f)
        return LaurentBall(f, self.start, [f.mul(c, x) for x in self.coeffs],
                           None if self.exact else self.prec)

    def shift(self, e):
        """Multiply by X**e (exact, any sign)."""
        if self.is_exact_zero:
            return self
        return LaurentBall(self.field, self.start - e, self.coeffs,
                           None if self.exact else self.prec - e)

    def truncate(self, prec):
        """Forget everything past index ``prec`` (the result is inexact)."""
        if not self.exact:
            prec = min(prec, self.prec)
        keep = self.coeffs[:max(0, prec - self.start + 1)]
        return LaurentBall(self.field, self.start, keep, prec)

    def inv(self, prec=None):
        """1/self.  Exact inputs need ``prec`` unless they are monomials."""
        f = self.field
        s = self.valuation()
        if s == INF:
            raise InsufficientPrecision("inverse of zero")
        u = self.coeffs
        if self.exact and len(u) == 1:
            return LaurentBall(f, -s, (f.inv(u[0]),))
        if self.exact:
            if prec is None:
                raise InsufficientPrecision("inverse of an exact series needs a target precision")
            target = prec
        else:
            target = self.prec - 2 * s
            if prec is not None:
                target = min(target, prec)
        nterms = target + s + 1
        if nterms <= 0:
            return LaurentBall(f, -s, (), target)
        b0 = f.inv(u[0])
        out = [b0]
        lu = len(u)
        if f.nu == 1:
            p = f.p
            nb0 = -b0 % p
            for n in range(1, nterms):
                acc = 0
                for i in range(1, min(n, lu - 1) + 1):
                    acc += u[i] * out[n - i]
                out.append(nb0 * acc % p)
        else:
            nb0 = f.neg(b0)
            for n in range(1, nterms):
                acc = 0
                for i in range(1, min(n, lu - 1) + 1):
                    acc = f.add(acc, f.mul(u[i], out[n - i]))
                out.append(f.mul(nb0, acc))
        return LaurentBall(f, -s, out, target)

    def div(self, other, prec=None):
        other = self._check(other)
        if self.is_exact_zero:
            return self
        inv_prec = None if prec is None else prec - self.valuation()
        out = self * other.inv(inv_prec)
        return out if prec is None or out.exact else out.truncate(prec)

    def polynomial_part(self):
        """The polynomial part [a] = sum of the terms with nonnegative X-power."""
        if not self.exact and self.prec < 0:
            raise InsufficientPrecision("polynomial part needs precision >= 0")
        if self.start > 0:
            return Poly.zero(self.field)
        top = -self.start
        cs = [self.coeff(-d) for d in range(top + 1)]
        return Poly(self.field, cs)

    def frac_part(self):
        """self - [self]: the part of norm at most k^{-1}."""
        if not self.exact and self.prec < 0:
            raise InsufficientPrecision("fractional part needs precision >= 0")
        if self.start >= 1:
            return self
        keep = self.coeffs[1 - self.start:]
        return LaurentBall(self.field, 1, keep, None if self.exact else self.prec)


def _add(a, b, negate):
    f = a.field
    if a.exact and b.exact:
        exact, prec = True, None
        hi = max(a.prec, b.prec)
    else:
        exact = False
        prec = min(x.prec for x in (a, b) if not x.exact)
        hi = prec
    lo = min(a.start if a.coeffs else hi + 1, b.start if b.coeffs else hi + 1)
    if hi < lo:
        return LaurentBall(f, lo, (), prec, exact)
    out = [0] * (hi - lo + 1)
    off = a.start - lo
    for i, c in enumerate(a.coeffs):
        if off + i <= hi - lo:
            out[off + i] = c
    off = b.start - lo
    if f.nu == 1:
        p = f.p
        sign = -1 if negate else 1
        for i, c in enumerate(b.coeffs):
            j = off + i
            if j <= hi - lo:
                out[j] = (out[j] + sign * c) % p
    else:
        for i, c in enumerate(b.coeffs):
            j = off + i
            if j <= hi - lo:
                out[j] = f.sub(out[j], c) if negate else f.add(out[j], c)
    return LaurentBall(f, lo, out, prec, exact)


def _mul(a, b):
    f = a.field
    if a.is_exact_zero or b.is_exact_zero:
        return LaurentBall.zero(f)
    sa = a.start if a.coeffs else a.prec + 1
    sb = b.start if b.coeffs else b.prec + 1
    if a.exact and b.exact:
        hi, prec = a.prec + b.prec, None
    else:
        na = INF if a.exact else a.prec
        nb = INF if b.exact else b.prec
        prec = min(sa + nb, sb + na, na + nb + 1)
        hi = prec
    lo = sa + sb
    if hi < lo or not a.coeffs or not b.coeffs:
        return LaurentBall(f, lo, (), prec)
    width = hi - lo
    A, B = a.coeffs, b.coeffs
    out = [0] * (min(width, len(A) + len(B) - 2) + 1)
    if f.nu == 1:
        p = f.p
        for i, x in enumerate(A):
            if i > width:
                break
            if x:
                lim = min(len(B), width - i + 1)
                for j in range(lim):
                    out[i + j] += x * B[j]
        out = [c % p for c in out]
    else:
        for i, x in enumerate(A):
            if i > width:
                break
            if x:
                lim = min(len(B), width - i + 1)
                for j in range(lim):
                    out[i + j] = f.add(out[i + j], f.mul(x, B[j]))
    return LaurentBall(f, lo, out, prec)


def valuation(a):
    return a.valuation()


def arith(kind, a, b=None, prec=None):
    """Dispatch ``add``/``sub``/``mul``/``inv`` with ball-radius propagation."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "inv":
        return a.inv(prec)
    raise ValueError(f"unknown arith kind {kind!r}")


def polynomial_part(a):
    return a.polynomial_part()


def vec_norm(kind, x):
    """Vector norms: ``max`` |x|, ``plus`` |x|_+ and ``pi_plus`` product of |x_i|_+."""
    norms = [c.norm() for c in x]
    if kind == "max":
        return norm_max(norms)
    if kind == "plus":
        return norm_max(norms + [ONE])
    if kind == "pi_plus":
        return NormExp(sum(max(n.e, 0) for n in norms if not n.is_zero))
    raise ValueError(f"unknown vec_norm kind {kind!r}")


def pi_plus_polys(qs):
    """Pi_+(q) for a vector of polynomials (|q_i|_+ = k^max(deg, 0))."""
    return NormExp(sum(max(q.deg, 0) for q in qs if q))
