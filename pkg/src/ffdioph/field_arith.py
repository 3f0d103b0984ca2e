"""Arithmetic in F_q (q = p^nu) and in the polynomial ring F_q[X].

Field elements are plain ints in ``range(q)``.  For an extension field the
int packs the power-basis coordinates of the element in base p: the element
c_0 + c_1 g + ... + c_{nu-1} g^{nu-1} is stored as sum c_i p^i.  The prime
subfield F_p is therefore embedded as the ints 0..p-1 in every field.

Polynomials in X are immutable :class:`Poly` objects holding a trimmed tuple
of coefficients in ascending degree.  The zero polynomial has degree
``NEG_INF`` (minus infinity), so ``deg(a*b) == deg(a) + deg(b)`` always.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import _parse
from .errors import (DegreeMismatch, DivideByZero, FieldMismatch, NotPrime,
                     ParseError, ReducibleModulus)

NEG_INF = -math.inf

_TABLE_LIMIT = 256


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_k with k = p**nu.

    ``modulus`` is the monic irreducible polynomial over F_p defining the
    generator ``g`` (ascending coefficient tuple, length nu + 1), or None for
    a prime field.
    """
    p: int
    nu: int = 1
    modulus: tuple = None
    _mul: list = field(default=None, init=False, repr=False, compare=False)
    _inv: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nu > 1 and self.k <= _TABLE_LIMIT:
            k = self.k
            mul = [[self._slow_mul(a, b) for b in range(k)] for a in range(k)]
            inv = [0] * k
            for a in range(1, k):
                inv[a] = next(b for b in range(1, k) if mul[a][b] == 1)
            object.__setattr__(self, "_mul", mul)
            object.__setattr__(self, "_inv", inv)

    @property
    def k(self):
        return self.p ** self.nu

    def __str__(self):
        if self.nu == 1:
            return str(self.p)
        return f"{self.p}^{self.nu}:{format_prime_poly(self.modulus, 'g')}"

    # -- element coordinates ------------------------------------------------
    def coeffs(self, a):
        """Power-basis coordinates of ``a`` (the FqElem view), length nu."""
        out = []
        for _ in range(self.nu):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_coeffs(self, cs):
        cs = list(cs)
        if self.nu > 1 and len(cs) > self.nu:
            cs = _reduce_prime_poly(cs, self.modulus, self.p)
        out = 0
        for c in reversed(cs):
            out = out * self.p + c % self.p
        return out

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.k)

    # -- field operations ---------------------------------------------------
    def add(self, a, b):
        if self.nu == 1:
            return (a + b) % self.p
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a):
        if self.nu == 1:
            return -a % self.p
        return self.from_coeffs([-x for x in self.coeffs(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.nu == 1:
            return a * b % self.p
        if self._mul is not None:
            return self._mul[a][b]
        return self._slow_mul(a, b)

    def _slow_mul(self, a, b):
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.nu - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_reduce_prime_poly(prod, self.modulus, self.p))

    def inv(self, a):
        if a == 0:
            raise DivideByZero("inverse of zero in F_q")
        if self.nu == 1:
            return pow(a, -1, self.p)
        if self._inv is not None:
            return self._inv[a]
        return self.pow(a, self.k - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    # -- text ---------------------------------------------------------------
    def format_elem(self, a):
        if self.nu == 1:
            return str(a)
        return format_prime_poly(self.coeffs(a), "g")

    def parse_elem(self, text):
        node = _parse.parse(str(text))
        return _parse.evaluate(node, lambda n: _Elem(self, self.from_int(n)),
                               self._elem_atom).v

    def _elem_atom(self, name, e):
        if name != "g" or self.nu == 1:
            raise ParseError(f"unknown symbol {name!r} for field {self}")
        return _Elem(self, self.pow(self.p, e))  # the int p encodes g


class _Elem:
    """Operator wrapper used only while parsing field elements."""
    __slots__ = ("f", "v")

    def __init__(self, f, v):
        self.f, self.v = f, v

    def __add__(self, o):
        return _Elem(self.f, self.f.add(self.v, o.v))

    def __sub__(self, o):
        return _Elem(self.f, self.f.sub(self.v, o.v))

    def __mul__(self, o):
        return _Elem(self.f, self.f.mul(self.v, o.v))


def _reduce_prime_poly(cs, modulus, p):
    cs = [c % p for c in cs]
    d = len(modulus) - 1
    for i in range(len(cs) - 1, d - 1, -1):
        c = cs[i]
        if c:
            for j in range(d + 1):
                cs[i - d + j] = (cs[i - d + j] - c * modulus[j]) % p
    return cs[:d]


def format_prime_poly(cs, var):
    terms = []
    for e in range(len(cs) - 1, -1, -1):
        c = cs[e]
        if not c:
            continue
        if e == 0:
            terms.append(str(c))
        else:
            mono = var if e == 1 else f"{var}^{e}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) or "0"


def make_field(p, nu=1, modulus=None):
    """Validate and build a :class:`FieldSpec`.

    ``modulus`` is an ascending coefficient sequence over F_p, or a string in
    the variable ``g`` such as ``"g^2+g+1"``.  It is required iff nu > 1.
    """
    if modulus is not None and not isinstance(modulus, str):
        modulus = tuple(modulus)
    return _make_field(p, nu, modulus)


@lru_cache(maxsize=None)
def _make_field(p, nu, modulus):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if nu < 1:
        raise DegreeMismatch("extension degree must be >= 1")
    if nu == 1:
        if modulus is not None and len(_modulus_coeffs(modulus, p)) != 2:
            raise DegreeMismatch("prime field takes no modulus")
        return FieldSpec(p, 1, None)
    if modulus is None:
        raise DegreeMismatch(f"extension of degree {nu} needs a modulus")
    cs = _modulus_coeffs(modulus, p)
    if len(cs) - 1 != nu:
        raise DegreeMismatch(f"modulus has degree {len(cs) - 1}, expected {nu}")
    if cs[-1] != 1:
        inv = pow(cs[-1], -1, p)
        cs = [c * inv % p for c in cs]
    base = FieldSpec(p)
    if not Poly(base, cs).is_irreducible():
        raise ReducibleModulus(f"{format_prime_poly(cs, 'g')} is reducible over F_{p}")
    return FieldSpec(p, nu, tuple(cs))


def _modulus_coeffs(modulus, p):
    if isinstance(modulus, str):
        base = FieldSpec(p)
        poly = Poly.parse(base, modulus.replace("g", "X"))
        cs = list(poly.coeffs)
    else:
        cs = [c % p for c in modulus]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def parse_field(text):
    """Parse ``"p"`` or ``"p^nu:modulus"`` (modulus in ``g``)."""
    text = str(text).strip()
    head, _, mod = text.partition(":")
    p, _, nu = head.partition("^")
    try:
        p, nu = int(p), int(nu or 1)
    except ValueError:
        raise ParseError(f"bad field syntax {text!r}") from None
    return make_field(p, nu, mod.strip() or None)


class Poly:
    """Immutable polynomial in F_q[X]."""
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, cs):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = cs
        return obj

    @classmethod
    def zero(cls, field):
        return cls._raw(field, ())

    @classmethod
    def one(cls, field):
        return cls._raw(field, (1,))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field, e, c=1):
        return cls(field, [0] * e + [c])

    @classmethod
    def x(cls, field):
        return cls._raw(field, (0, 1))

    @classmethod
    def parse(cls, field, text):
        node = _parse.parse(str(text))
        const = lambda n: cls.const(field, field.from_int(n))

        def atom(name, e):
            if name == "X" and e >= 0:
                return cls.monomial(field, e)
            if name == "g" and field.nu > 1:
                return cls.const(field, field.pow(field.p, e))
            raise ParseError(f"bad polynomial symbol {name}^{e}")
        return _parse.evaluate(node, const, atom)

    # -- basic data ---------------------------------------------------------
    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        # lexicographic on (degree, coefficients from the top), zero smallest
        return (len(self.coeffs), self.coeffs[::-1]) < (len(other.coeffs), other.coeffs[::-1])

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        f = self.field
        terms = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            cs = f.format_elem(c)
            if f.nu > 1 and "+" in cs:
                cs = f"({cs})"
            if e == 0:
                terms.append(cs)
            else:
                mono = "X" if e == 1 else f"X^{e}"
                terms.append(mono if c == 1 else f"{cs}*{mono}")
        return "+".join(terms) or "0"

    def _check(self, other):
        if isinstance(other, int):
            return Poly.const(self.field, self.field.from_int(other))
        if other.field != self.field:
            raise FieldMismatch("polynomials over different fields")
        return other

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        if f.nu == 1:
            p = f.p
            out = [(x + y) % p for x, y in zip(a, b)] + list(a[len(b):])
        else:
            out = [f.add(x, y) for x, y in zip(a, b)] + list(a[len(b):])
        return Poly(f, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Poly._raw(f, tuple(f.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(f)
        if f.nu == 1:
            p = f.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(f, [c % p for c in out])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return Poly(f, out)

    __rmul__ = __mul__

    def scale(self, c):
        f = self.field
        return Poly(f, [f.mul(c, x) for x in self.coeffs])

    def shift(self, e):
        """Multiply by X^e (e >= 0)."""
        if not self.coeffs:
            return self
        return Poly._raw(self.field, (0,) * e + self.coeffs)

    def __pow__(self, e):
        out, base = Poly.one(self.field), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = self._check(other)
        if not other.coeffs:
            raise DivideByZero("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv_lc = f.inv(other.lc)
        if len(rem) <= db:
            return Poly.zero(f), self
        quo = [0] * (len(rem) - db)
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = f.mul(c, inv_lc)
            quo[i - db] = q
            for j in range(db + 1):
                rem[i - db + j] = f.sub(rem[i - db + j], f.mul(q, bc[j]))
        return Poly(f, quo), Poly(f, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lc))

    def gcd(self, other):
        a, b = self, self._check(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """Return (g, s, t) with s*self + t*other = g monic."""
        f = self.field
        r0, r1 = self, self._check(other)
        s0, s1 = Poly.one(f), Poly.zero(f)
        t0, t1 = Poly.zero(f), Poly.one(f)
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if not r0:
            return r0, s0, t0
        c = f.inv(r0.lc)
        return r0.scale(c), s0.scale(c), t0.scale(c)

    def __call__(self, a):
        f = self.field
        out = 0
        for c in reversed(self.coeffs):
            out = f.add(f.mul(out, a), c)
        return out

    def derivative(self):
        f = self.field
        return Poly(f, [f.mul(f.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def is_irreducible(self):
        """Rabin-style test via gcd(X^{q^i} - X, f) for i <= deg/2."""
        d = self.deg
        if d < 1:
            return False
        if d == 1:
            return True
        f = self.field
        x = Poly.x(f)
        h = x
        for _ in range(d // 2):
            h = _powmod(h, f.k, self)
            if (h - x).gcd(self).deg > 0:
                return False
        return True


def _powmod(base, e, mod):
    out = Poly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            out = out * base % mod
        base = base * base % mod
        e >>= 1
    return out


def poly_op(kind, a, b):
    """Dispatch ``add``/``mul``/``divmod``/``gcd`` on two polynomials."""
    if a.field != b.field:
        raise FieldMismatch("polynomials over different fields")
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "divmod":
        return divmod(a, b)
    if kind == "gcd":
        if not b and not a:
            raise DivideByZero("gcd(0, 0) has no monic generator")
        return a.gcd(b)
    raise ValueError(f"unknown poly_op kind {kind!r}")
