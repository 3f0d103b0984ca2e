"""Exact Haar-measure checks of the (C, alpha)-good property.

A cell is a sub-ball ``c + X^{-r_1} O x ... x X^{-r_d} O`` of the ball of
interest.  On a cell every polynomial is its Taylor expansion at the center
c, so |g(c + y)| is pinned down by

    v = |g(c)|   and   V = max_{beta != 0} |D_beta g(c)| k^{-beta . r}:

if v > V then |g| == v on the whole cell, and in any case |g| <= max(v, V).
Cells that cannot be classified are split along their widest coordinate
until they can, or until the resolution cap is reached.  Since norms are
powers of k, every threshold comparison is an exponent comparison.
"""
import heapq
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, gcd

from .calculus import MPoly, PolyMap
from .errors import DimensionMismatch, InsufficientPrecision
from .laurent import LaurentBall, NormExp, norm_max

N_MAX = 24


def _lcm(a, b):
    return a * b // gcd(a, b)


class Radical:
    """The non-negative real number value**(1/index), kept exact."""
    __slots__ = ("value", "index")

    def __init__(self, value, index=1):
        value = Fraction(value)
        if value < 0 or index < 1:
            raise ValueError("radicals need a non-negative radicand and index >= 1")
        self.value = value
        self.index = int(index)

    @classmethod
    def of(cls, x):
        return x if isinstance(x, Radical) else cls(Fraction(x), 1)

    @classmethod
    def kpow(cls, k, exponent):
        """k**exponent for a rational exponent."""
        exponent = Fraction(exponent)
        return cls(Fraction(k) ** exponent.numerator, exponent.denominator)

    def _lift(self, L):
        return self.value ** (L // self.index)

    def _pair(self, other):
        other = Radical.of(other)
        L = _lcm(self.index, other.index)
        return self._lift(L), other._lift(L), L

    def __mul__(self, other):
        a, b, L = self._pair(other)
        return Radical(a * b, L).simplify()

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, L = self._pair(other)
        return Radical(a / b, L).simplify()

    def __eq__(self, other):
        if not isinstance(other, (Radical, int, Fraction)):
            return NotImplemented
        a, b, _ = self._pair(other)
        return a == b

    def __hash__(self):
        s = self.simplify()
        return hash((s.value, s.index))

    def __lt__(self, other):
        a, b, _ = self._pair(other)
        return a < b

    def __le__(self, other):
        a, b, _ = self._pair(other)
        return a <= b

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def simplify(self):
        """Lower the index while the radicand stays a perfect power."""
        v, s = self.value, self.index
        for d in range(s, 1, -1):
            if s % d == 0:
                num = _iroot(v.numerator, d)
                den = _iroot(v.denominator, d)
                if num is not None and den is not None:
                    return Radical(Fraction(num, den), s // d).simplify()
        return Radical.__new_raw(v, s)

    @staticmethod
    def __new_raw(v, s):
        out = object.__new__(Radical)
        out.value, out.index = v, s
        return out

    def __float__(self):
        return float(self.value) ** (1.0 / self.index)

    def __repr__(self):
        return f"Radical({self})"

    def __str__(self):
        return str(self.value) if self.index == 1 else f"({self.value})^(1/{self.index})"

    def to_record(self):
        return {"num": self.value.numerator, "den": self.value.denominator, "root": self.index}


def _iroot(n, d):
    if n < 0:
        return None
    r = round(n ** (1.0 / d)) if n < 2 ** 1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // d + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** d < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** d == n:
            return c
    return None


@dataclass(frozen=True)
class MeasureValue:
    """count * k^{-res_exp}, with count prime to k unless it is zero."""
    count: int
    res_exp: int
    k: int = dc_field(default=0, compare=False)

    @classmethod
    def from_fraction(cls, value, k):
        value = Fraction(value)
        if value == 0:
            return cls(0, 0, k)
        num, den, e = value.numerator, value.denominator, 0
        while den % k == 0:
            den //= k
            e += 1
        if den != 1:
            raise ValueError(f"{value} is not a k-adic rational")
        while num % k == 0:
            num //= k
            e -= 1
        return cls(num, e, k)

    def to_fraction(self):
        return Fraction(self.count) / Fraction(self.k) ** self.res_exp

    def __le__(self, other):
        return self.to_fraction() <= Fraction(other.to_fraction() if isinstance(other, MeasureValue) else other)

    def __str__(self):
        return f"{self.count}*{self.k}^-{self.res_exp}" if self.count else "0"

    def to_record(self):
        return {"count": self.count, "res_exp": self.res_exp}


@dataclass(frozen=True)
class BallSpec:
    center: tuple
    radius_exp: tuple

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(self.center))
        r = self.radius_exp
        if isinstance(r, int):
            r = (r,) * len(self.center)
        object.__setattr__(self, "radius_exp", tuple(r))
        if len(self.radius_exp) != len(self.center):
            raise DimensionMismatch("center and radius dimensions differ")

    @classmethod
    def unit(cls, field, d=1):
        """B_1: the closed unit ball |x| <= 1 of K^d."""
        return cls(tuple(LaurentBall.zero(field) for _ in range(d)), (0,) * d)

    @property
    def d(self):
        return len(self.center)

    @property
    def field(self):
        return self.center[0].field

    def measure(self):
        return MeasureValue.from_fraction(self.measure_fraction(), self.field.k)

    def measure_fraction(self):
        return Fraction(self.field.k) ** -sum(self.radius_exp)


def grid(b, N):
    """Coset representatives center + sum_{i=j..N} a_i X^{-i}, per coordinate."""
    field = b.field
    per_coord = []
    for c, j in zip(b.center, b.radius_exp):
        if N < j - 1:
            raise ValueError("resolution below the ball radius")
        reps = []
        for digits in itertools.product(field.elements(), repeat=N - j + 1):
            terms = {-(j + i): a for i, a in enumerate(digits) if a}
            reps.append(c + LaurentBall.from_laurent_dict(field, terms))
        per_coord.append(reps)
    return itertools.product(*per_coord)


# -- cell machinery ----------------------------------------------------------

def components_of(f):
    if isinstance(f, MPoly):
        return (f,)
    if isinstance(f, PolyMap):
        return f.components
    return tuple(f)


def taylor_at(comps, center):
    return [g.taylor(center) for g in comps]


def shift_taylor(tay, j, h_coeff, r, field):
    """Re-center a Taylor dict by h = h_coeff * X^{-r} in variable j."""
    if h_coeff == 0:
        return tay
    out = {}
    hpow = {0: None}
    for beta, c in tay.items():
        m = beta[j]
        for b in range(m + 1):
            mult = comb(m, b) % field.p
            if not mult:
                continue
            e = m - b
            if e not in hpow:
                hpow[e] = field.pow(h_coeff, e)
            scal = field.from_int(mult)
            if e:
                scal = field.mul(scal, hpow[e])
            term = c.scale(scal).shift(-r * e) if e else c.scale(scal)
            nb = beta[:j] + (b,) + beta[j + 1:]
            if nb in out:
                out[nb] = out[nb] + term
            else:
                out[nb] = term
    return {bb: v for bb, v in out.items() if not v.is_exact_zero}


def cell_bounds(tay, radii):
    """(v, V) for one component: |value at center| and the variation bound."""
    zero = (0,) * len(radii)
    c0 = tay.get(zero)
    v = c0.norm() if c0 is not None else NormExp(None)
    var = NormExp(None)
    for beta, c in tay.items():
        if beta == zero:
            continue
        n = c.norm().scale(-sum(b * r for b, r in zip(beta, radii)))
        if var < n:
            var = n
    return v, var


class Cell:
    __slots__ = ("center", "radii", "taylor", "bounds")

    def __init__(self, center, radii, taylor):
        self.center = center
        self.radii = radii
        self.taylor = taylor
        self.bounds = [cell_bounds(t, radii) for t in taylor]

    @classmethod
    def root(cls, comps, b):
        return cls(b.center, b.radius_exp, taylor_at(comps, b.center))

    def value(self):
        """max_i |g_i(center)|."""
        return norm_max(v for v, _ in self.bounds)

    def upper(self):
        return norm_max(max(v, V) for v, V in self.bounds)

    def lower_const(self):
        """Largest v_i among components that are constant on the cell."""
        return norm_max(v for v, V in self.bounds if V < v)

    def is_constant(self):
        m = self.lower_const()
        if m.is_zero:
            return all(v.is_zero and V.is_zero for v, V in self.bounds)
        return all(max(v, V) <= m for v, V in self.bounds if not V < v)

    def log_measure(self):
        return sum(self.radii)

    def children(self, cap):
        j = min(range(len(self.radii)), key=lambda i: (self.radii[i], i))
        r = self.radii[j]
        if r > cap:
            raise InsufficientPrecision(f"cell refinement exceeded resolution {cap}")
        field = self.center[0].field
        radii = self.radii[:j] + (r + 1,) + self.radii[j + 1:]
        out = []
        for a in field.elements():
            center = list(self.center)
            if a:
                center[j] = center[j] + LaurentBall.monomial(field, -r, a)
            tay = [shift_taylor(t, j, a, r, field) for t in self.taylor]
            out.append(Cell(tuple(center), radii, tay))
        return out


def sup_on_ball(f, b, N=N_MAX):
    """sup over b of max_i |f_i|, by branch and bound on cells."""
    comps = components_of(f)
    root = Cell.root(comps, b)
    best = NormExp(None)
    heap = [(0, 0, root)]
    counter = itertools.count(1)
    while heap:
        _, _, cell = heapq.heappop(heap)
        val = cell.value()
        if best < val:
            best = val
        if cell.upper() <= best:
            continue
        for ch in cell.children(N):
            up = ch.upper()
            if best < up:
                heapq.heappush(heap, (-(up.e if up.e is not None else -10 ** 9), next(counter), ch))
    return best


def sublevel_measures_abs(f, b, thetas, N=N_MAX):
    """Exact measures of {x in b : max_i |f_i(x)| < theta} for each theta."""
    comps = components_of(f)
    thetas = list(thetas)
    k = b.field.k
    totals = [Fraction(0)] * len(thetas)
    stack = [(Cell.root(comps, b), tuple(range(len(thetas))))]
    while stack:
        cell, pending = stack.pop()
        up = cell.upper()
        const = cell.lower_const()
        undecided = []
        for idx in pending:
            th = thetas[idx]
            if up < th:
                totals[idx] += Fraction(k) ** -cell.log_measure()
            elif not const < th:
                continue
            else:
                undecided.append(idx)
        if undecided:
            for ch in reversed(cell.children(N)):
                stack.append((ch, tuple(undecided)))
    return [MeasureValue.from_fraction(t, k) for t in totals]


def sublevel_measures(f, b, eps_list, N=N_MAX, sup=None):
    """Measures of {|f| < eps * sup_b |f|} for each eps (NormExp powers of k)."""
    sup = sup_on_ball(f, b, N) if sup is None else sup
    if sup.is_zero:
        return [MeasureValue(0, 0, b.field.k) for _ in eps_list]
    return sublevel_measures_abs(f, b, [e * sup for e in eps_list], N)


def sublevel_measure(f, b, eps, N=N_MAX):
    return sublevel_measures(f, b, [eps], N)[0]


@dataclass(frozen=True)
class GoodEntry:
    eps: NormExp
    sublevel: MeasureValue
    bound: Radical
    passed: bool

    def to_record(self):
        rec = {"eps_exp": self.eps.e}
        rec.update(self.sublevel.to_record())
        rec.update({f"bound_{k}": v for k, v in self.bound.to_record().items()})
        rec["pass"] = self.passed
        return rec


@dataclass(frozen=True)
class GoodReport:
    sup_norm: NormExp
    entries: tuple
    overall: bool
    c_emp: Radical
    C: Radical
    alpha: Fraction
    eps_grid: str = "powers_of_k"


def _eps_power(k, eps, alpha):
    return Radical.kpow(k, eps.e * Fraction(alpha))


def empirical_constant(measure, eps, alpha, lam, k):
    """measure / (eps^alpha * lam) as an exact radical."""
    return Radical(measure.to_fraction() / lam) / _eps_power(k, eps, alpha)


def check_good(f, b, C, alpha, eps_list, N=N_MAX):
    """Compare the sublevel measures against C * eps^alpha * lambda(b), exactly."""
    k = b.field.k
    C = Radical.of(C)
    alpha = Fraction(alpha)
    eps_list = [e if isinstance(e, NormExp) else NormExp(int(e)) for e in eps_list]
    sup = sup_on_ball(f, b, N)
    measures = sublevel_measures(f, b, eps_list, N, sup)
    lam = b.measure_fraction()
    entries = []
    c_emp = Radical(0)
    for eps, mv in zip(eps_list, measures):
        bound = C * _eps_power(k, eps, alpha) * Radical(lam)
        entries.append(GoodEntry(eps, mv, bound, Radical(mv.to_fraction()) <= bound))
        c = empirical_constant(mv, eps, alpha, lam, k)
        if c_emp < c:
            c_emp = c
    return GoodReport(sup, tuple(entries), all(e.passed for e in entries), c_emp, C, alpha)


# -- exhaustive polynomial families ------------------------------------------

def _family_symmetries(field, degree, coeff_degree):
    """Linear maps on coefficient vectors that preserve every sublevel measure on B_1.

    Generated by f -> c f, f(x) -> f(u x + b) and X -> u X + b on the
    coefficients; the last is an isometric, measure-preserving automorphism
    of K that fixes the unit ball.
    """
    import numpy as np
    from .field_arith import Poly
    p = field.p
    dim = (degree + 1) * (coeff_degree + 1)
    X = Poly.x(field)
    units = [a for a in field.elements() if a]

    def encode(coeffs):
        v = np.zeros(dim, dtype=np.int64)
        for m, a in enumerate(coeffs):
            for dd, c in enumerate(a.coeffs):
                v[m * (coeff_degree + 1) + dd] = c
        return v

    def basis(idx):
        m, dd = divmod(idx, coeff_degree + 1)
        out = [Poly.zero(field)] * (degree + 1)
        out[m] = Poly.monomial(field, dd)
        return out

    def act(coeffs, c, u, b, su, sb):
        sub = X.scale(su) + Poly.const(field, sb)
        coeffs = [sum((a_coeff_term.scale(ac) for a_coeff_term, ac in
                       [(sub ** e, cc) for e, cc in enumerate(a.coeffs)]), Poly.zero(field))
                  for a in coeffs]
        out = []
        for i in range(degree + 1):
            acc = Poly.zero(field)
            for m in range(i, degree + 1):
                mult = comb(m, i) * pow(u, i, p) * pow(b, m - i, p) % p
                acc = acc + coeffs[m].scale(mult)
            out.append(acc.scale(c))
        return out

    mats = []
    for c, u, b, su, sb in itertools.product(units, units, field.elements(), units,
                                             field.elements()):
        cols = [encode(act(basis(i), c, u, b, su, sb)) for i in range(dim)]
        mats.append(np.stack(cols, axis=1) % p)
    return mats


def family_orbits(field, degree, coeff_degree):
    """(representative codes, orbit sizes) for the polynomial family."""
    import numpy as np
    p = field.p
    dim = (degree + 1) * (coeff_degree + 1)
    codes = np.arange(p ** dim, dtype=np.int64)
    weights = p ** np.arange(dim, dtype=np.int64)
    digits = (codes[:, None] // weights) % p
    canon = codes.copy()
    for M in _family_symmetries(field, degree, coeff_degree):
        img = ((digits @ M.T) % p) @ weights
        np.minimum(canon, img, out=canon)
    reps, sizes = np.unique(canon, return_counts=True)
    return [int(r) for r in reps], [int(s) for s in sizes]


def decode_family_member(field, code, degree, coeff_degree):
    """Code -> univariate MPoly whose x^m coefficient is a polynomial in X."""
    from .field_arith import Poly
    p = field.p
    terms = {}
    for m in range(degree + 1):
        cs = []
        for _ in range(coeff_degree + 1):
            code, r = divmod(code, p)
            cs.append(r)
        a = Poly(field, cs)
        if a:
            terms[(m,)] = LaurentBall.from_poly(a)
    return MPoly(field, 1, terms)


@dataclass(frozen=True)
class FamilyReport:
    family_size: int
    orbits: int
    c_emp: Radical
    alpha: Fraction
    eps_exps: tuple
    resolution: int
    all_pass: bool
    worst: str
    rows: tuple

    def to_record(self):
        rec = {"family_size": self.family_size, "orbits": self.orbits,
               "alpha_num": self.alpha.numerator, "alpha_den": self.alpha.denominator,
               "eps_exps": list(self.eps_exps), "resolution": self.resolution,
               "all_pass": self.all_pass, "worst": self.worst}
        rec.update({f"c_emp_{k}": v for k, v in self.c_emp.to_record().items()})
        return rec


def _family_task(args):
    field, code, degree, coeff_degree, eps_exps, N = args
    f = decode_family_member(field, code, degree, coeff_degree)
    b = BallSpec.unit(field)
    sup = sup_on_ball(f, b, N)
    ms = sublevel_measures(f, b, [NormExp(e) for e in eps_exps], N, sup)
    return code, sup.e, tuple((m.count, m.res_exp) for m in ms)


def polynomial_family_sweep(field, degree, coeff_degree, alpha, eps_exps, N=12, jobs=1,
                            codes=None):
    """Exhaust every f = sum a_m x^m (deg a_m <= coeff_degree) on B_1.

    Members are grouped into orbits of the symmetry group above and one
    representative per orbit is measured.  The report gives the least C
    with every member (C, alpha)-good on the eps grid, and re-checks every
    entry against that C exactly.
    """
    from .parallel import pmap
    alpha = Fraction(alpha)
    k = field.k
    if codes is None:
        reps, sizes = family_orbits(field, degree, coeff_degree)
    else:
        reps, sizes = list(codes), [1] * len(codes)
    tasks = [(field, c, degree, coeff_degree, tuple(eps_exps), N) for c in reps]
    results = pmap(_family_task, tasks, jobs)
    c_emp, worst = Radical(0), None
    for code, _, ms in results:
        for e, (cnt, res) in zip(eps_exps, ms):
            c = empirical_constant(MeasureValue(cnt, res, k), NormExp(e), alpha, 1, k)
            if c_emp < c:
                c_emp, worst = c, code
    all_pass = True
    for code, _, ms in results:
        for e, (cnt, res) in zip(eps_exps, ms):
            bound = c_emp * _eps_power(k, NormExp(e), alpha)
            if not Radical(MeasureValue(cnt, res, k).to_fraction()) <= bound:
                all_pass = False
    worst_s = "" if worst is None else str(decode_family_member(field, worst, degree, coeff_degree))
    return FamilyReport(sum(sizes), len(reps), c_emp, alpha, tuple(eps_exps), N, all_pass,
                        worst_s, tuple(results))
