"""Good approximations of x are short vectors along the diagonal flow.

Run with:  python demos/01_approximation_and_flows.py
"""
from ffdioph.cfrac_witness import (Witness, best_witness, cf_expand, convergents,
                                   make_liouville, make_periodic)
from ffdioph.field_arith import Poly, make_field
from ffdioph.flows import bounded_scan, verify_link
from ffdioph.laurent import LaurentBall

F = make_field(3)
X = Poly.x(F)

# A Liouville-type series: 1's at X^-1, X^-3, X^-9, ...
x = make_liouville(3, 300)
print("x =", x.truncate(30))

# The continued fraction has quotients of rapidly growing degree.
cf = cf_expand(x, 4)
print("partial quotients:", [str(a) for a in cf.quotients])
for p, q in convergents(cf):
    print(f"  p/q = ({p}) / ({q})")

# Exhaustive search finds the best q of degree <= 3.
w = best_witness((x,), 3)
print(f"best q = {w.q[0]}, |p + q x| = 3^{w.err.e}")

# Each witness q = X^(3^j) gives a short vector of g_t u_x Z^2 with t = 3^j + floor(m/2).
for j in (1, 2, 3):
    q = Poly.monomial(F, 3 ** j)
    p = -(x * LaurentBall.from_poly(q)).polynomial_part()
    rep = verify_link((x,), Witness(p, (q,), None, None), 1)
    print(f"j={j}: t={rep.params.t.t[0]}, delta=3^{rep.delta.e} <= r=3^{rep.r.e}: {rep.holds}")

# Bounded against divergent orbits.
per = make_periodic([X], 120)
rat = LaurentBall.parse(F, "X^-1")
print("periodic [0; X, X, ...]: min delta over t <= 50 =",
      f"3^{bounded_scan((per,), 50).min_delta.e}")
print("1/X: min delta over t <= 50 =", f"3^{bounded_scan((rat,), 50).min_delta.e}")
