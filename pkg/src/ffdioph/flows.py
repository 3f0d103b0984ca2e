"""Diagonal flows on the space of unimodular lattices in K^{n+1}.

The lattice attached to x in K^n is u_x Z^{n+1} = {(p + q.x, q_1, ..., q_n)}.
g_t multiplies the first coordinate by X^{t_1+...+t_n} and coordinate i by
X^{-t_i}.  Short vectors of g_t u_x Z^{n+1} are exactly good simultaneous
approximations, which is what :func:`verify_link` makes concrete.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .cfrac_witness import witness_error
from .errors import DimensionMismatch, FieldMismatch, InsufficientPrecision, WitnessTooWeak
from .laurent import LaurentBall, NormExp, norm_max, pi_plus_polys
from .polylattice import LatticeBasis, delta


@dataclass(frozen=True)
class FlowVector:
    t: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(v) for v in self.t))
        if any(v < 0 for v in self.t):
            raise ValueError("flow exponents must be non-negative")

    @classmethod
    def one_param(cls, t, n):
        return cls((t,) * n)

    @property
    def n(self):
        return len(self.t)

    @property
    def t_sum(self):
        return sum(self.t)


def _as_flow(t):
    return t if isinstance(t, FlowVector) else FlowVector(t)


def unipotent(fx):
    """Basis of u_{f(x)} Z^{n+1}: rows e_0 and f_i e_0 + e_i."""
    fx = tuple(fx)
    field = fx[0].field
    if any(v.field != field for v in fx):
        raise FieldMismatch("mixed fields in point")
    n = len(fx)
    zero = LaurentBall.zero(field)
    one = LaurentBall.const(field, 1)
    rows = [[one] + [zero] * n]
    for i, v in enumerate(fx):
        rows.append([v] + [one if j == i else zero for j in range(n)])
    return LatticeBasis(field, rows)


def flow_apply(t, b):
    """g_t b: scale coordinate 0 by X^{t_sum} and coordinate i by X^{-t_i}."""
    t = _as_flow(t)
    if b.m != t.n + 1:
        raise DimensionMismatch(f"flow of dimension {t.n} on a lattice in K^{b.m}")
    shifts = (t.t_sum,) + tuple(-v for v in t.t)
    return LatticeBasis(b.field, [[v.shift(e) for v, e in zip(r, shifts)] for r in b.rows])


def traj_delta(fx, t):
    """delta(g_t u_{f(x)} Z^{n+1}), certified when f(x) is only known to a radius.

    Every vector of norm <= 1 has |q_i| <= k^{t_i}, so replacing f(x) by its
    known part moves such vectors by at most
    k^{t_sum} * max_i k^{t_i} * radius_i.  If that is below the delta of the
    truncated lattice, both deltas agree.
    """
    t = _as_flow(t)
    fx = tuple(fx)
    if len(fx) != t.n:
        raise DimensionMismatch("point and flow dimensions differ")
    if all(v.exact for v in fx):
        return delta(flow_apply(t, unipotent(fx)))
    known = tuple(v if v.exact else LaurentBall(v.field, v.start, v.coeffs) for v in fx)
    d = delta(flow_apply(t, unipotent(known)))
    pert = norm_max(v.radius.scale(t.t_sum + ti) for v, ti in zip(fx, t.t))
    if not pert < d:
        raise InsufficientPrecision(
            f"precision of x too low to certify delta at t={list(t.t)}")
    return d


@dataclass(frozen=True)
class LinkParams:
    m: int
    r: NormExp
    t: FlowVector
    eps: Fraction

    @property
    def gamma(self):
        """Measured log_k(1/r) / t_sum (0 when t_sum = 0)."""
        if self.t.t_sum == 0:
            return Fraction(0)
        return Fraction(-self.r.e, self.t.t_sum)


def link_params(q, eps, n=None):
    """m with Pi_+(q) = k^m, r = k^{-floor(m eps/(n+1))} and t_i = log|q_i|_+ + floor."""
    q = tuple(q)
    n = len(q) if n is None else n
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not any(q):
        raise ValueError("q must be nonzero")
    m = pi_plus_polys(q).e
    fl = floor(m * eps / (n + 1))
    t = FlowVector(tuple(max(qi.deg, 0) + fl for qi in q))
    return LinkParams(m, NormExp(-fl), t, eps)


@dataclass(frozen=True)
class LinkReport:
    holds: bool
    delta: NormExp
    r: NormExp
    params: LinkParams
    witness_norm: NormExp
    err: NormExp


def verify_link(x, w, eps):
    """Check that an eps-witness (p, q) forces delta(g_t u_x Z^{n+1}) <= r."""
    x = tuple(x)
    eps = Fraction(eps)
    params = link_params(w.q, eps, len(x))
    err_ball = witness_error(x, w.p, w.q)
    err = err_ball.norm_bound()
    # |p + q.x| <= k^{-(1+eps) m}
    if not err.is_zero and err.e > -(1 + eps) * params.m:
        raise WitnessTooWeak(f"|p+q.x| = k^{err.e} exceeds Pi_+(q)^(-1-eps)")
    d = traj_delta(x, params.t)
    t = params.t
    flowed = [err.scale(t.t_sum)]
    for qi, ti in zip(w.q, t.t):
        flowed.append(NormExp(qi.deg - ti) if qi else NormExp(None))
    return LinkReport(not params.r < d, d, params.r, params, norm_max(flowed), err)


@dataclass(frozen=True)
class ScanReport:
    min_delta: NormExp
    argmin_t: tuple
    rows: tuple
    variant: str

    @property
    def floor(self):
        return self.min_delta

    @property
    def derived_c(self):
        """C = floor^{n+1} for the bounded-orbit reformulation."""
        n = len(self.argmin_t)
        return self.min_delta ** (n + 1)


def scan_flows(n, T, variant):
    if variant == "one_param":
        return [FlowVector((s,) * n) for s in range(T + 1)]
    if variant == "multi":
        out = []
        for total in range(T + 1):
            for t in itertools.product(range(total + 1), repeat=n):
                if sum(t) == total:
                    out.append(FlowVector(t))
        return out
    raise ValueError(f"unknown variant {variant!r}")


def _traj_task(args):
    x, t = args
    return traj_delta(x, t)


def bounded_scan(x, T, variant="one_param", jobs=1):
    """min of traj_delta over the scanned flows, with the first minimizer."""
    from .parallel import pmap
    x = tuple(x)
    flows = scan_flows(len(x), T, variant)
    deltas = pmap(_traj_task, [(x, t) for t in flows], jobs)
    best = None
    for t, d in zip(flows, deltas):
        if best is None or d < best[0]:
            best = (d, t.t)
    rows = tuple((t.t, d) for t, d in zip(flows, deltas))
    return ScanReport(best[0], best[1], rows, variant)
