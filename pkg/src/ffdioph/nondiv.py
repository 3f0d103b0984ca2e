"""Quantitative non-divergence for h(x) = g_t u_{f(x)} on a ball.

psi_Delta(x) is the size |h(x) Delta| of the image of a primitive submodule.
Its Plücker coordinates are affine in f(x), so psi_Delta is a max of
|polynomials| and all sublevel questions reduce to the cell machinery of
:mod:`goodfn`.

measure_E computes the exact measure of {x : delta(g_t Lambda_{f(x)}) < eps}.
A vector of norm < eps = k^e has |q_i| < k^{e+t_i} and first coordinate
X^{t_sum} {q.f(x)}, so the set is a union over finitely many q of
{|{q.f(x)}| < k^{e - t_sum}}; each cell is settled once every q is certified
constant on it.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .calculus import MPoly, PolyMap, nondeg_order
from .errors import DimensionMismatch, InsufficientPrecision
from .field_arith import Poly
from .flows import FlowVector, traj_delta
from .goodfn import (N_MAX, BallSpec, Cell, MeasureValue, Radical, check_good,
                     components_of, sublevel_measures_abs, sup_on_ball)
from .laurent import LaurentBall, NormExp, norm_max
from .parallel import pmap
from .polylattice import Submodule, enumerate_primitive, wedge_norm


@dataclass(frozen=True)
class HSpec:
    f: PolyMap
    t: FlowVector

    def __post_init__(self):
        if not isinstance(self.t, FlowVector):
            object.__setattr__(self, "t", FlowVector(self.t))
        if self.t.n != self.f.n:
            raise DimensionMismatch("flow and map dimensions differ")

    @property
    def m(self):
        return self.f.n + 1

    def scales(self):
        """X-exponents of g_t on each coordinate."""
        return (self.t.t_sum,) + tuple(-v for v in self.t.t)

    def matrix(self, x):
        """h(x) as rows of LaurentBalls."""
        fx = self.f(x)
        field = self.f.field
        s = self.scales()
        zero = LaurentBall.zero(field)
        one = LaurentBall.const(field, 1)
        rows = [[one] + list(fx)]
        for i in range(self.f.n):
            rows.append([one if j == i + 1 else zero for j in range(self.m)])
        return [[v.shift(s[a]) for v in row] for a, row in enumerate(rows)]


def _image_vectors(h, x, delta_sub):
    mat = h.matrix(x)
    out = []
    for w in delta_sub.basis:
        wl = [LaurentBall.from_poly(c) for c in w]
        vec = []
        for row in mat:
            acc = LaurentBall.zero(h.f.field)
            for a, c in zip(row, wl):
                if not c.is_exact_zero and not a.is_exact_zero:
                    acc = acc + a * c
            vec.append(acc)
        out.append(vec)
    return out


def psi_components(h, delta_sub):
    """The Plücker coordinates of h(x) Delta as polynomials in x.

    Outside coordinate 0 a coordinate is the minor W_I of the basis; with
    0 in I the first row becomes W_0 + sum_j f_j W_j, which expands into
    W_I + sum_j (-1)^{pos_J(j)} f_j W_J for J = I - {0} + {j}.  Each
    coordinate is then multiplied by the g_t factors of the indices in I.
    """
    field = h.f.field
    d = h.f.d
    minors = delta_sub.minors()
    scales = h.scales()
    comps = []
    for I, wI in minors.items():
        poly = MPoly.const(field, d, LaurentBall.from_poly(wI))
        if 0 in I:
            rest = [i for i in I if i != 0]
            for j in range(1, h.m):
                if j in rest:
                    continue
                J = tuple(sorted(rest + [j]))
                wJ = minors[J]
                if not wJ:
                    continue
                sign = -1 if J.index(j) % 2 else 1
                coeff = LaurentBall.from_poly(wJ if sign == 1 else -wJ)
                poly = poly + h.f.components[j - 1] * coeff
        shift = sum(scales[a] for a in I)
        comps.append(MPoly(field, d, {e: c.shift(shift) for e, c in poly.terms.items()}))
    return comps


def psi_delta_coords(h, x, delta_sub):
    return norm_max(g(x).norm() for g in psi_components(h, delta_sub))


def psi_delta(h, x, delta_sub):
    """|h(x) Delta| by the direct wedge, cross-checked against the coordinate formula."""
    x = tuple(x)
    direct = wedge_norm(_image_vectors(h, x, delta_sub), h.f.field)
    coords = psi_delta_coords(h, x, delta_sub)
    if direct != coords:
        raise AssertionError(f"wedge routes disagree: {direct} vs {coords}")
    return direct


# -- conditions of the non-divergence criterion ------------------------------

@dataclass(frozen=True)
class DeltaRow:
    submodule: str
    rank: int
    sup: NormExp
    good: bool
    c_emp: Radical
    sup_ge_rho: bool
    below_rho: bool
    boundary: bool

    def to_record(self):
        rec = {"delta": self.submodule, "rank": self.rank, "sup_exp": self.sup.e,
               "good": self.good, "sup_ge_rho": self.sup_ge_rho, "below_rho": self.below_rho}
        rec.update({f"c_emp_{k}": v for k, v in self.c_emp.to_record().items()})
        return rec


@dataclass(frozen=True)
class ConditionsReport:
    rows: tuple
    cond1: bool
    cond2: bool
    cond3_count: int
    scan_truncated: bool
    degree_bound: int

    @property
    def passed(self):
        return self.cond1 and self.cond2


def default_degree_bound(m):
    return 2 if m <= 2 else 1


def _delta_task(args):
    b, h, rho, C, alpha, eps_list, N, sub, bound = args
    comps = psi_components(h, sub)
    rep = check_good(comps, b, C, alpha, eps_list, N)
    below = sublevel_measures_abs(comps, b, [rho], N)[0].count > 0
    boundary = max(c.deg for r in sub.basis for c in r) >= bound
    return DeltaRow(str(sub), sub.rank, rep.sup_norm, rep.overall, rep.c_emp,
                    not rep.sup_norm < rho, below, boundary)


def conditions_check(b, h, rho=NormExp(0), C=1, alpha=1, degree_bound=None, N=N_MAX,
                     eps_list=None, jobs=1):
    """Check goodness, sup >= rho and count the Delta with inf psi < rho."""
    field = h.f.field
    if degree_bound is None:
        degree_bound = default_degree_bound(h.m)
    if eps_list is None:
        eps_list = [NormExp(-1), NormExp(-2), NormExp(-3)]
    subs = list(enumerate_primitive(field, h.m, h.m - 1, degree_bound))
    tasks = [(b, h, rho, C, alpha, tuple(eps_list), N, s, degree_bound) for s in subs]
    rows = pmap(_delta_task, tasks, jobs)
    full = Submodule(field, [[1 if i == j else 0 for j in range(h.m)] for i in range(h.m)])
    rows.append(_delta_task((b, h, rho, C, alpha, tuple(eps_list), N, full, 10 ** 9)))
    truncated = any(r.boundary and r.sup < rho.scale(2) for r in rows)
    return ConditionsReport(tuple(rows), all(r.good for r in rows),
                            all(r.sup_ge_rho for r in rows),
                            sum(r.below_rho for r in rows), truncated, degree_bound)


# -- the exceptional sets E_t -------------------------------------------------

def short_q(field, t, e):
    """All nonzero q with |q_i| < k^{e + t_i}."""
    choices = []
    for ti in t.t:
        top = e + ti - 1
        if top < 0:
            choices.append([Poly.zero(field)])
        else:
            choices.append([Poly(field, cs) for cs in
                            itertools.product(field.elements(), repeat=top + 1)])
    return [q for q in itertools.product(*choices) if any(q)]


def _frac_norm(v):
    return v.frac_part().norm()


def _classify(cell, qs, thr):
    """(True, ()) or (False, ()) when the cell lies inside or outside the set,
    else (None, qs still undecided).

    A q with variation below its value keeps that value on every subcell, so
    it is dropped for good once it is out.
    """
    zero = (0,) * len(cell.radii)
    vals = [t.get(zero, None) for t in cell.taylor]
    variation = [V for _, V in cell.bounds]
    field = cell.center[0].field
    pending = []
    for q in qs:
        acc = LaurentBall.zero(field)
        var = NormExp(None)
        for qi, v, V in zip(q, vals, variation):
            if not qi:
                continue
            if v is not None:
                acc = acc + v * LaurentBall.from_poly(qi)
            var = max(var, V.scale(qi.deg))
        phi = _frac_norm(acc)
        if var < thr:
            if phi < thr:
                return True, ()
        elif var < phi:
            continue
        else:
            pending.append(q)
    return (None, tuple(pending)) if pending else (False, ())


def measure_E(f, b, t, eps, N=N_MAX, check=True):
    """Exact lambda{x in b : delta(g_t Lambda_{f(x)}) < eps}."""
    t = t if isinstance(t, FlowVector) else FlowVector(t)
    eps = eps if isinstance(eps, NormExp) else NormExp(int(eps))
    if t.n != f.n:
        raise DimensionMismatch("flow and map dimensions differ")
    field = f.field
    k = field.k
    if eps.is_zero:
        return MeasureValue(0, 0, k)
    qs = tuple(short_q(field, t, eps.e))
    if not qs:
        return MeasureValue(0, 0, k)
    thr = NormExp(eps.e - t.t_sum)
    total = Fraction(0)
    stack = [(Cell.root(components_of(f), b), qs)]
    while stack:
        cell, live = stack.pop()
        status, live = _classify(cell, live, thr)
        if status is None:
            stack.extend((ch, live) for ch in reversed(cell.children(N)))
            continue
        if check:
            inside = traj_delta(f(cell.center), t) < eps
            if inside != status:
                raise AssertionError("cell classification disagrees with lattice reduction")
        if status:
            total += Fraction(k) ** -cell.log_measure()
    return MeasureValue.from_fraction(total, k)


# -- the measure bound --------------------------------------------------------

def default_constants(f, b, l_max=10):
    """C = d l^{3 - 1/l} and alpha = 1/(d l) with l the nondegeneracy order at the center."""
    l = nondeg_order(f, b.center, l_max)
    if l is None:
        raise ValueError("map is not nondegenerate at the ball center up to l_max")
    d = f.d
    return Radical(d ** l * l ** (3 * l - 1), l), Fraction(1, d * l), l


def measure_bound(n, C, eps, rho, alpha, lam, k):
    """(n+1) C (eps/rho)^alpha lambda(B) as an exact radical."""
    return Radical(n + 1) * Radical.of(C) * Radical.kpow(k, (eps.e - rho.e) * Fraction(alpha)) \
        * Radical(lam)


def _bound_record(r, k):
    num, den = r.value.numerator, r.value.denominator
    e = 0
    while den % k == 0:
        den //= k
        e += 1
    return {"bound_num": num, "bound_den_exp": e, "bound_den_rest": den, "bound_root": r.index}


@dataclass(frozen=True)
class ImpRow:
    t: tuple
    eps: NormExp
    measure: MeasureValue
    bound: Radical
    passed: bool
    out_of_range: bool

    def to_record(self, k):
        rec = {"t": list(self.t), "eps_exp": self.eps.e}
        rec.update(self.measure.to_record())
        rec.update(_bound_record(self.bound, k))
        rec["pass"] = self.passed
        rec["out_of_range"] = self.out_of_range
        return rec


@dataclass(frozen=True)
class NondivReport:
    rows: tuple
    C: Radical
    alpha: Fraction
    rho: NormExp
    overall: bool
    k: int

    def records(self):
        return [r.to_record(self.k) for r in self.rows]


def flows_up_to(n, total):
    out = []
    for s in range(total + 1):
        for t in itertools.product(range(s + 1), repeat=n):
            if sum(t) == s:
                out.append(FlowVector(t))
    return out


def _measure_task(args):
    f, b, t, eps, N = args
    return measure_E(f, b, t, eps, N)


def verify_impmain(f, b, t_list, eps_list, C=None, alpha=None, rho=NormExp(0), N=N_MAX,
                   jobs=1):
    """Compare lambda(E) with (n+1) C (eps/rho)^alpha lambda(B) for each (t, eps)."""
    k = f.field.k
    if C is None or alpha is None:
        C0, a0, _ = default_constants(f, b)
        C = C0 if C is None else C
        alpha = a0 if alpha is None else alpha
    C = Radical.of(C)
    alpha = Fraction(alpha)
    eps_list = [e if isinstance(e, NormExp) else NormExp(int(e)) for e in eps_list]
    t_list = [t if isinstance(t, FlowVector) else FlowVector(t) for t in t_list]
    lam = b.measure_fraction()
    pairs = [(t, e) for t in t_list for e in eps_list]
    measures = pmap(_measure_task, [(f, b, t, e, N) for t, e in pairs], jobs)
    rows = []
    for (t, e), mv in zip(pairs, measures):
        bound = measure_bound(f.n, C, e, rho, alpha, lam, k)
        oor = rho < e
        rows.append(ImpRow(t.t, e, mv, bound, Radical(mv.to_fraction()) <= bound, oor))
    overall = all(r.passed for r in rows if not r.out_of_range)
    return NondivReport(tuple(rows), C, alpha, rho, overall, k)


# -- Borel-Cantelli partial sums ---------------------------------------------

def bc_threshold(gamma, q):
    """delta <= k^{-ceil(gamma q)} is delta < k^{1 - ceil(gamma q)}."""
    return NormExp(1 - ceil(Fraction(gamma) * q))


def bc_partial_sums(f, b, gamma, T, N=N_MAX, jobs=1):
    """[(q, shell sum, partial sum)] for q = 1..T with shells over t_sum = q."""
    k = f.field.k
    out = []
    partial = Fraction(0)
    for q in range(1, T + 1):
        eps = bc_threshold(gamma, q)
        flows = [t for t in flows_up_to(f.n, q) if t.t_sum == q]
        ms = pmap(_measure_task, [(f, b, t, eps, N) for t in flows], jobs)
        shell = sum((m.to_fraction() for m in ms), Fraction(0))
        partial += shell
        out.append((q, MeasureValue.from_fraction(shell, k), MeasureValue.from_fraction(partial, k)))
    return out
